//! Report envelope: schema version, echoed configuration, result, and a
//! hash that pins everything except the timestamp.

use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use sha2::{Digest, Sha256};

use ggexp::io::to_json_string;
use ggexp::Result;

#[derive(Serialize)]
struct Payload<'a, C: Serialize, R: Serialize> {
    schema: u32,
    command: &'a str,
    config: &'a C,
    result: &'a R,
}

#[derive(Serialize)]
struct Document<'a, C: Serialize, R: Serialize> {
    schema: u32,
    command: &'a str,
    config: &'a C,
    result: &'a R,
    payload_sha256: String,
    timestamp: u64,
}

/// A rendered report plus the digest of its timestamp-free payload.
pub struct Report {
    pub text: String,
    #[allow(dead_code)]
    pub payload_sha256: String,
}

/// Serializes `{schema, command, config, result}`, hashes those bytes,
/// then re-serializes with the digest and a unix timestamp appended.
/// Identical inputs produce identical digests regardless of when or where
/// the report is written.
pub fn render<C: Serialize, R: Serialize>(command: &str, config: &C, result: &R) -> Result<Report> {
    let payload = Payload {
        schema: 1,
        command,
        config,
        result,
    };
    let canonical = to_json_string(&payload)?;
    let digest = Sha256::digest(canonical.as_bytes());
    let payload_sha256 = format!("{digest:x}");
    let timestamp = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let doc = Document {
        schema: 1,
        command,
        config,
        result,
        payload_sha256: payload_sha256.clone(),
        timestamp,
    };
    let mut text = to_json_string(&doc)?;
    text.push('\n');
    Ok(Report {
        text,
        payload_sha256,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize)]
    struct Config {
        nmax: usize,
    }

    #[derive(Serialize)]
    struct Outcome {
        value: f64,
        pass: bool,
    }

    #[test]
    fn digest_ignores_timestamp() {
        let c = Config { nmax: 5 };
        let r = Outcome {
            value: 0.5,
            pass: true,
        };
        let a = render("verify test", &c, &r).unwrap();
        let b = render("verify test", &c, &r).unwrap();
        assert_eq!(a.payload_sha256, b.payload_sha256);
        assert!(a.text.contains("\"schema\": 1"));
        assert!(a.text.contains(&a.payload_sha256));
    }

    #[test]
    fn digest_tracks_config() {
        let r = Outcome {
            value: 0.5,
            pass: true,
        };
        let a = render("verify test", &Config { nmax: 5 }, &r).unwrap();
        let b = render("verify test", &Config { nmax: 6 }, &r).unwrap();
        assert_ne!(a.payload_sha256, b.payload_sha256);
    }
}

//! Canonical JSON encoding: object keys sorted, two-space indentation, shortest round-trip
//! float formatting, trailing newline. Equal values always encode to equal bytes.
//!
//! Non-finite floats encode as `null`.

use serde::Serialize;

use crate::error::Result;

pub fn canonical_bytes<T: Serialize + ?Sized>(value: &T) -> Result<Vec<u8>> {
    // serde_json::Map is a BTreeMap (no preserve_order), so going through Value sorts keys.
    let v = serde_json::to_value(value)?;
    let mut out = serde_json::to_vec_pretty(&v)?;
    out.push(b'\n');
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize)]
    struct Unsorted {
        zeta: u8,
        alpha: f64,
    }

    #[test]
    fn keys_sorted_and_stable() {
        let s = String::from_utf8(canonical_bytes(&Unsorted { zeta: 1, alpha: 0.1 }).unwrap()).unwrap();
        assert_eq!(s, "{\n  \"alpha\": 0.1,\n  \"zeta\": 1\n}\n");
    }
}

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// The shipped default moduli, in the `p k = c0 c1 ... ck` format.
pub const DEFAULT_MODULI: &str = include_str!("moduli.conf");

/// Parses a moduli config. Later entries for the same `(p, k)` win.
pub fn parse_moduli(text: &str) -> Result<BTreeMap<(u32, u32), Vec<u32>>> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |reason: &str| Error::ModuliConfig { line: i + 1, reason: reason.to_string() };
        let (key, value) = line.split_once('=').ok_or_else(|| bad("missing `=`"))?;
        let key: Vec<u32> = key
            .split_whitespace()
            .map(str::parse)
            .collect::<Result<_, _>>()
            .map_err(|_| bad("key must be `p k`"))?;
        let [p, k] = key[..] else {
            return Err(bad("key must be `p k`"));
        };
        let coeffs: Vec<u32> = value
            .split_whitespace()
            .map(str::parse)
            .collect::<Result<_, _>>()
            .map_err(|_| bad("coefficients must be integers"))?;
        if coeffs.len() != k as usize + 1 {
            return Err(bad("expected k + 1 coefficients"));
        }
        out.insert((p, k), coeffs);
    }
    Ok(out)
}

pub fn default_modulus(p: u32, k: u32) -> Result<Vec<u32>> {
    let table = parse_moduli(DEFAULT_MODULI).expect("shipped moduli config parses");
    table.get(&(p, k)).cloned().ok_or(Error::NoDefaultModulus { p: p as u64, k })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Gf;
    use crate::field::FieldSpec;

    #[test]
    fn every_shipped_modulus_is_irreducible_and_primitive() {
        for ((p, k), modulus) in parse_moduli(DEFAULT_MODULI).unwrap() {
            let f = Gf::new(FieldSpec { p, k, modulus }).unwrap();
            // residue of x (or the constant root for k = 1) generates the group
            let x = if k == 1 { f.generator() } else { p };
            assert_eq!(f.multiplicative_order(x), Some(f.order()), "GF({p}^{k})");
        }
    }

    #[test]
    fn family_fields_are_covered() {
        for (p, k) in [(2, 1), (2, 6), (2, 10), (2, 12), (3, 6)] {
            default_modulus(p, k).unwrap();
        }
        assert!(default_modulus(17, 4).is_err());
    }

    #[test]
    fn config_errors_report_line() {
        let err = parse_moduli("# ok\n2 3 = 1 1\n").unwrap_err();
        assert!(matches!(err, Error::ModuliConfig { line: 2, .. }));
        assert!(parse_moduli("2 = 1 1").is_err());
    }
}

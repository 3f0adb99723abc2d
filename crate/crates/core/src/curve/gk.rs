use super::{check_q_n, invalid, tower, AffinePlace, CurveDescriptor, CurveFamily, DistanceKind, TheoremRow};
use crate::error::Result;
use crate::field::{Elem, Gf};

/// `y^{q+1} = x^q + x`, `z^{q^2-q+1} = y^{q^2} - y` over GF(q^6).
#[derive(Debug)]
pub struct Gk;

impl CurveFamily for Gk {
    fn name(&self) -> &'static str {
        "gk"
    }

    fn describe(&self, q: u64, n: Option<u32>) -> Result<CurveDescriptor> {
        if let Some(n) = n.filter(|&n| n != 3) {
            return Err(invalid("gk", format!("the tower parameter is fixed at 3, got n = {n}")));
        }
        let (p, e) = check_q_n("gk", q, 3, 3)?;
        let genus = (q.pow(3) + 1) * (q * q - 2) / 2 + 1;
        let expected = q.pow(8) - q.pow(6) + q.pow(5) + 1;
        Ok(tower::tower_descriptor(&Gk, q, 3, p, e, genus, expected))
    }

    fn enumerate(&self, f: &Gf, desc: &CurveDescriptor) -> Vec<AffinePlace> {
        tower::enumerate(f, desc)
    }

    fn satisfies(&self, f: &Gf, desc: &CurveDescriptor, pt: &AffinePlace) -> bool {
        tower::satisfies(f, desc, pt)
    }

    fn is_nonsingular(&self, f: &Gf, desc: &CurveDescriptor, pt: &AffinePlace) -> bool {
        tower::is_nonsingular(f, desc, pt)
    }

    fn a_set_by_condition(&self, f: &Gf, desc: &CurveDescriptor) -> Result<Vec<Elem>> {
        let q2 = (desc.q * desc.q) as u128;
        Ok(f.all_elements()
            .filter(|&xi| {
                let t = f.pow(xi, desc.m as u128);
                f.add(f.add(f.pow(t, q2 * q2), f.pow(t, q2)), t) == 0
            })
            .collect())
    }

    fn a_set_size(&self, desc: &CurveDescriptor) -> Option<u64> {
        let q = desc.q;
        Some(q.pow(5) - q.pow(3) + q * q)
    }

    fn closed_form_f(&self, desc: &CurveDescriptor) -> Option<Vec<(u64, i64)>> {
        let q = desc.q;
        Some(vec![(1, 1), (q.pow(5) - q.pow(4) + q * q - q + 1, 1), (q.pow(5) - q.pow(3) + q * q, 1)])
    }

    fn closed_form_f_prime(&self, desc: &CurveDescriptor) -> Option<Vec<(u64, i64)>> {
        let q = desc.q;
        Some(vec![(0, 1), (q.pow(5) - q.pow(4) + q * q - q, 1)])
    }

    fn theorem_range(&self, desc: &CurveDescriptor) -> Option<(u64, u64)> {
        let q = desc.q;
        let lo = q.pow(5) - 2 * q.pow(3) + q * q - 2;
        let hi = (q.pow(7) - q.pow(6) + q.pow(5) + q.pow(4) - 2 * q.pow(3) + q * q - 2) / 2;
        Some((lo, hi))
    }

    fn theorem_row(&self, desc: &CurveDescriptor, s: u64) -> Option<TheoremRow> {
        let (lo, hi) = self.theorem_range(desc)?;
        if !(lo..=hi).contains(&s) {
            return None;
        }
        let q = desc.q as i64;
        let s = s as i64;
        Some(TheoremRow {
            s: s as u64,
            n: (q.pow(8) - q.pow(6) + q.pow(5)) as u64,
            k: q.pow(8) - q.pow(6) + 2 * q.pow(5) - 2 * q.pow(3) + q * q - 2 - 2 * s,
            d: s - q.pow(5) + 2 * q.pow(3) - q * q + 2,
            d_kind: DistanceKind::LowerBound,
        })
    }
}

impl Gk {
    /// Smallest `s` of the regime where the rows provably violate the
    /// quantum Gilbert-Varshamov condition: `7q^5 - 14q^3 + 7q^2 + 12`.
    pub fn gv_violation_start(q: u64) -> u64 {
        7 * q.pow(5) - 14 * q.pow(3) + 7 * q * q + 12
    }
}

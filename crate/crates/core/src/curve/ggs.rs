use super::{check_q_n, tower, AffinePlace, CurveDescriptor, CurveFamily, DistanceKind, TheoremRow};
use crate::error::Result;
use crate::field::{Elem, Gf};

/// `y^{q+1} = x^q + x`, `z^m = y^{q^2} - y` with `m = (q^n+1)/(q+1)`, over GF(q^{2n}).
#[derive(Debug)]
pub struct Ggs;

pub(crate) fn twice_genus(q: u64, n: u32) -> u64 {
    (q - 1) * (q.pow(n + 1) + q.pow(n) - q * q)
}

/// `((q^{n-1}-1) m + 1) q^e` with `m = (q^n+1)/(q+1)`: the pole order at
/// infinity of `f(z)/f'(z)` for the GGS (`e = 3`) and ABQ (`e = 2`) constructions.
pub(crate) fn gamma(q: u64, n: u32, e: u32) -> u64 {
    ((q.pow(n - 1) - 1) * (q.pow(n) + 1) / (q + 1) + 1) * q.pow(e)
}

impl CurveFamily for Ggs {
    fn name(&self) -> &'static str {
        "ggs"
    }

    fn describe(&self, q: u64, n: Option<u32>) -> Result<CurveDescriptor> {
        let n = n.unwrap_or(5);
        let (p, e) = check_q_n("ggs", q, n, 5)?;
        let expected = q.pow(2 * n + 2) - q.pow(n + 3) + q.pow(n + 2) + 1;
        Ok(tower::tower_descriptor(&Ggs, q, n, p, e, twice_genus(q, n) / 2, expected))
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
        Ok(tower::a_set_by_trace(f, desc, desc.n))
    }

    fn a_set_size(&self, desc: &CurveDescriptor) -> Option<u64> {
        let (q, n) = (desc.q, desc.n);
        Some(q.pow(2 * n - 1) - q.pow(n) + q.pow(n - 1))
    }

    fn closed_form_f(&self, desc: &CurveDescriptor) -> Option<Vec<(u64, i64)>> {
        Some(tower::split_polynomial_terms(desc.q, desc.n))
    }

    fn closed_form_f_prime(&self, desc: &CurveDescriptor) -> Option<Vec<(u64, i64)>> {
        Some(tower::split_derivative_terms(desc.q, desc.n))
    }

    fn theorem_range(&self, desc: &CurveDescriptor) -> Option<(u64, u64)> {
        let two_g = twice_genus(desc.q, desc.n);
        Some((two_g - 2, (gamma(desc.q, desc.n, 3) + two_g - 2) / 2))
    }

    fn theorem_row(&self, desc: &CurveDescriptor, s: u64) -> Option<TheoremRow> {
        let (lo, hi) = self.theorem_range(desc)?;
        if !(lo..=hi).contains(&s) {
            return None;
        }
        let (q, n) = (desc.q, desc.n);
        let len = q.pow(2 * n + 2) - q.pow(n + 3) + q.pow(n + 2);
        let two_g = twice_genus(q, n) as i64;
        let s = s as i64;
        Some(TheoremRow {
            s: s as u64,
            n: len,
            k: len as i64 + two_g - 2 - 2 * s,
            d: s - two_g + 2,
            d_kind: DistanceKind::LowerBound,
        })
    }
}

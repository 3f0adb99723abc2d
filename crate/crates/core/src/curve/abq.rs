use rayon::prelude::*;

use super::ggs::gamma;
use super::{check_q_n, tower, AffinePlace, CurveDescriptor, CurveFamily, DistanceKind, InfinitePlaceData, TheoremRow};
use crate::error::Result;
use crate::field::{Elem, Gf};

/// `y^{q^2} - y = x^m` with `m = (q^n+1)/(q+1)`, over GF(q^{2n}).
#[derive(Debug)]
pub struct Abq;

fn twice_genus(q: u64, n: u32) -> u64 {
    (q - 1) * (q.pow(n) - q)
}

impl CurveFamily for Abq {
    fn name(&self) -> &'static str {
        "abq"
    }

    fn describe(&self, q: u64, n: Option<u32>) -> Result<CurveDescriptor> {
        let n = n.unwrap_or(3);
        let (p, e) = check_q_n("abq", q, n, 3)?;
        let m = (q.pow(n) + 1) / (q + 1);
        Ok(CurveDescriptor {
            family: &Abq,
            q,
            n,
            p,
            ambient_degree: 2 * n * e,
            field_size: q.pow(2 * n),
            m,
            genus: twice_genus(q, n) / 2,
            expected_places: q.pow(2 * n + 1) - q.pow(n + 2) + q.pow(n + 1) + 1,
            infinite: InfinitePlaceData { count: 1, pole_orders: vec![q * q, m, 0] },
            arity: 2,
            fibering: 0,
            fibre_size: q * q,
            reduction_bounds: vec![None, Some((q * q) as u32 - 1), Some(0)],
            tower_order: vec![0, 1],
        })
    }

    fn enumerate(&self, f: &Gf, desc: &CurveDescriptor) -> Vec<AffinePlace> {
        let q2 = (desc.q * desc.q) as u128;
        let layer = tower::preimages(f, |y| f.sub(f.pow(y, q2), y));
        (0..f.size())
            .into_par_iter()
            .flat_map_iter(|x| {
                let ys = &layer[f.pow(x, desc.m as u128) as usize];
                ys.iter().map(move |&y| AffinePlace([x, y, 0]))
            })
            .collect()
    }

    fn satisfies(&self, f: &Gf, desc: &CurveDescriptor, pt: &AffinePlace) -> bool {
        let [x, y, z] = pt.0;
        let q2 = (desc.q * desc.q) as u128;
        z == 0 && f.sub(f.pow(y, q2), y) == f.pow(x, desc.m as u128)
    }

    fn is_nonsingular(&self, f: &Gf, desc: &CurveDescriptor, pt: &AffinePlace) -> bool {
        let [x, y, _] = pt.0;
        let q2 = desc.q * desc.q;
        let c = |n: u64| f.from_int((n % f.p() as u64) as i64);
        // F = Y^{q^2} - Y - X^m
        let dx = f.neg(f.mul(c(desc.m), f.pow(x, desc.m as u128 - 1)));
        let dy = f.sub(f.mul(c(q2), f.pow(y, q2 as u128 - 1)), 1);
        dx != 0 || dy != 0
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
        Some((two_g.saturating_sub(2), (gamma(desc.q, desc.n, 2) + two_g - 2) / 2))
    }

    fn theorem_row(&self, desc: &CurveDescriptor, s: u64) -> Option<TheoremRow> {
        let (lo, hi) = self.theorem_range(desc)?;
        if !(lo..=hi).contains(&s) {
            return None;
        }
        let (q, n) = (desc.q, desc.n);
        let len = q.pow(2 * n + 1) - q.pow(n + 2) + q.pow(n + 1);
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

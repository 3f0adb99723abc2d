use rayon::prelude::*;

use super::{check_q_n, invalid, tower, AffinePlace, CurveDescriptor, CurveFamily, DistanceKind, InfinitePlaceData, TheoremRow};
use crate::error::Result;
use crate::field::{Elem, Gf};

/// `x^{q+1} - 1 = y^{q+1}`, `y h(x) = z^m` with
/// `h(x) = (x^{q^2} - x)/(x^{q+1} - 1) = x sum_{j<q-1} x^{j(q+1)}`, over GF(q^{2n}).
///
/// The A-set criterion, split polynomials and quantum tables are only known
/// for `q = 2`, `n` in {3, 5}.
#[derive(Debug)]
pub struct Ggk2;

fn h(f: &Gf, q: u64, x: Elem) -> Elem {
    let step = f.pow(x, q as u128 + 1);
    let mut acc = 0;
    let mut term = x;
    for _ in 0..q - 1 {
        acc = f.add(acc, term);
        term = f.mul(term, step);
    }
    acc
}

fn h_derivative(f: &Gf, q: u64, x: Elem) -> Elem {
    (0..q - 1).fold(0, |acc, j| {
        let e = j * (q + 1);
        let c = f.from_int(((e + 1) % f.p() as u64) as i64);
        f.add(acc, f.mul(c, f.pow(x, e as u128)))
    })
}

impl CurveFamily for Ggk2 {
    fn name(&self) -> &'static str {
        "ggk2"
    }

    fn describe(&self, q: u64, n: Option<u32>) -> Result<CurveDescriptor> {
        let n = n.unwrap_or(3);
        let (p, e) = check_q_n("ggk2", q, n, 3)?;
        let m = (q.pow(n) + 1) / (q + 1);
        let genus = (q - 1) * (q.pow(n + 1) + q.pow(n) - q * q) / 2;
        let field_size = q.pow(2 * n);
        Ok(CurveDescriptor {
            family: &Ggk2,
            q,
            n,
            p,
            ambient_degree: 2 * n * e,
            field_size,
            m,
            genus,
            // no closed count is published; the curve is maximal
            expected_places: field_size + 2 * genus * q.pow(n) + 1,
            infinite: InfinitePlaceData { count: q as usize + 1, pole_orders: vec![m, m, q * q - q] },
            arity: 3,
            fibering: 2,
            fibre_size: q.pow(3) - q,
            reduction_bounds: vec![None, Some(q as u32), Some(m as u32 - 1)],
            tower_order: vec![0, 1, 2],
        })
    }

    fn enumerate(&self, f: &Gf, desc: &CurveDescriptor) -> Vec<AffinePlace> {
        let q = desc.q;
        let y_roots = tower::preimages(f, |y| f.pow(y, q as u128 + 1));
        let z_roots = tower::preimages(f, |z| f.pow(z, desc.m as u128));
        (0..f.size())
            .into_par_iter()
            .flat_map_iter(|x| {
                let hx = h(f, q, x);
                let mut out = Vec::new();
                for &y in &y_roots[f.sub(f.pow(x, q as u128 + 1), 1) as usize] {
                    for &z in &z_roots[f.mul(y, hx) as usize] {
                        out.push(AffinePlace([x, y, z]));
                    }
                }
                out
            })
            .collect()
    }

    fn satisfies(&self, f: &Gf, desc: &CurveDescriptor, pt: &AffinePlace) -> bool {
        let q = desc.q as u128;
        let [x, y, z] = pt.0;
        f.sub(f.pow(x, q + 1), 1) == f.pow(y, q + 1)
            && f.mul(y, h(f, desc.q, x)) == f.pow(z, desc.m as u128)
    }

    fn is_nonsingular(&self, f: &Gf, desc: &CurveDescriptor, pt: &AffinePlace) -> bool {
        let q = desc.q;
        let [x, y, z] = pt.0;
        let c = |n: u64| f.from_int((n % f.p() as u64) as i64);
        // F1 = X^{q+1} - 1 - Y^{q+1}, F2 = Y h(X) - Z^m
        let r1 = [
            f.mul(c(q + 1), f.pow(x, q as u128)),
            f.neg(f.mul(c(q + 1), f.pow(y, q as u128))),
            0,
        ];
        let r2 = [
            f.mul(y, h_derivative(f, q, x)),
            h(f, q, x),
            f.neg(f.mul(c(desc.m), f.pow(z, desc.m as u128 - 1))),
        ];
        tower::rank_two(r1, r2, f)
    }

    /// Nonzero `a` such that `Y^6 + Y^3 = a^{2^n+1}` has six distinct roots.
    fn a_set_by_condition(&self, f: &Gf, desc: &CurveDescriptor) -> Result<Vec<Elem>> {
        if desc.q != 2 {
            return Err(invalid("ggk2", "the algebraic A-set criterion is only available for q = 2"));
        }
        // y -> y^6 + y^3 is a polynomial map, so its fibre sizes count distinct roots
        let mut hist = vec![0u32; f.size() as usize];
        for y in f.all_elements() {
            hist[f.add(f.pow(y, 6), f.pow(y, 3)) as usize] += 1;
        }
        let e = (1u128 << desc.n) + 1;
        Ok(f.all_elements().filter(|&a| a != 0 && hist[f.pow(a, e) as usize] == 6).collect())
    }

    fn a_set_size(&self, desc: &CurveDescriptor) -> Option<u64> {
        (desc.q == 2).then(|| 4 * ((1 << desc.n) + 1) * ((1 << (desc.n - 1)) - 1) / 3)
    }

    fn excludes_zero_fibre(&self) -> bool {
        true
    }

    fn closed_form_f(&self, desc: &CurveDescriptor) -> Option<Vec<(u64, i64)>> {
        let exps: &[u64] = match (desc.q, desc.n) {
            (2, 3) => &[0, 18, 27, 36],
            (2, 5) => &[0, 66, 132, 330, 363, 396, 495, 528, 594, 627, 660],
            _ => return None,
        };
        Some(exps.iter().map(|&e| (e, 1)).collect())
    }

    fn closed_form_f_prime(&self, desc: &CurveDescriptor) -> Option<Vec<(u64, i64)>> {
        let exps: &[u64] = match (desc.q, desc.n) {
            (2, 3) => &[26],
            (2, 5) => &[362, 494, 626],
            _ => return None,
        };
        Some(exps.iter().map(|&e| (e, 1)).collect())
    }

    fn theorem_range(&self, desc: &CurveDescriptor) -> Option<(u64, u64)> {
        match (desc.q, desc.n) {
            (2, 3) => Some((6, 13)),
            (2, 5) => Some((30, 49)),
            _ => None,
        }
    }

    fn theorem_row(&self, desc: &CurveDescriptor, s: u64) -> Option<TheoremRow> {
        let (lo, hi) = self.theorem_range(desc)?;
        if !(lo..=hi).contains(&s) {
            return None;
        }
        let si = s as i64;
        let (n, k, d) = match desc.n {
            3 => (216, if s == 6 { 196 } else { 192 - 6 * (si - 7) }, 3 * si - 18),
            _ => (3960, if s == 30 { 3868 } else { 3864 - 6 * (si - 31) }, 3 * si - 90),
        };
        Some(TheoremRow { s, n, k, d, d_kind: DistanceKind::AsPrinted })
    }

    fn notes(&self, desc: &CurveDescriptor) -> Vec<String> {
        let mut notes = Vec::new();
        match (desc.q, desc.n) {
            (2, 3) => notes.push(
                "source table labels the curve GGK2(2,6); rows follow GGK2(2,3) over GF(2^6)".into(),
            ),
            (2, 5) => notes.push(
                "source table labels the curve GGK2(2,10) with alphabet 2^6; rows follow GGK2(2,5) over GF(2^10)"
                    .into(),
            ),
            _ => {}
        }
        if let Some((lo, _)) = self.theorem_range(desc) {
            if let Some(row) = self.theorem_row(desc, lo) {
                if row.d <= 0 {
                    notes.push(format!("distance column is {} at s = {lo}, kept as printed", row.d));
                }
            }
        }
        notes
    }
}

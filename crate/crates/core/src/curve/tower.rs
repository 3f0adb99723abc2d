//! Shared machinery for the towers `y^{q+1} = x^q + x`, `z^m = y^{q^2} - y`
//! (GK and GGS differ only in `m` and the ambient field).

use rayon::prelude::*;

use super::{AffinePlace, CurveDescriptor, InfinitePlaceData};
use crate::field::{Elem, Gf};

/// `table[v]` lists every `u` with `map(u) = v`, ascending.
pub(crate) fn preimages(f: &Gf, map: impl Fn(Elem) -> Elem + Sync) -> Vec<Vec<Elem>> {
    let images: Vec<Elem> = (0..f.size()).into_par_iter().map(&map).collect();
    let mut table = vec![Vec::new(); f.size() as usize];
    for (u, &v) in images.iter().enumerate() {
        table[v as usize].push(u as Elem);
    }
    table
}

pub(crate) fn trace_like(f: &Gf, t: Elem, q: u64, terms: u32) -> Elem {
    // sum_{i < terms} t^{q^{2i}}
    let mut acc = 0;
    let mut power = t;
    for _ in 0..terms {
        acc = f.add(acc, power);
        power = f.pow(power, (q * q) as u128);
    }
    acc
}

pub(crate) fn tower_descriptor(
    family: &'static dyn super::CurveFamily,
    q: u64,
    n: u32,
    p: u32,
    e: u32,
    genus: u64,
    expected_places: u64,
) -> CurveDescriptor {
    let m = (q.pow(n) + 1) / (q + 1);
    CurveDescriptor {
        family,
        q,
        n,
        p,
        ambient_degree: 2 * n * e,
        field_size: q.pow(2 * n),
        m,
        genus,
        expected_places,
        infinite: InfinitePlaceData { count: 1, pole_orders: vec![m * (q + 1), m * q, q.pow(3)] },
        arity: 3,
        fibering: 2,
        fibre_size: q.pow(3),
        reduction_bounds: vec![Some(q as u32 - 1), Some((q * q) as u32 - 1), None],
        tower_order: vec![2, 1, 0],
    }
}

pub(crate) fn enumerate(f: &Gf, desc: &CurveDescriptor) -> Vec<AffinePlace> {
    let q = desc.q as u128;
    let m = desc.m as u128;
    let y_layer = preimages(f, |y| f.sub(f.pow(y, q * q), y));
    let x_layer = preimages(f, |x| f.add(f.pow(x, q), x));
    (0..f.size())
        .into_par_iter()
        .flat_map_iter(|z| {
            let mut out = Vec::new();
            for &y in &y_layer[f.pow(z, m) as usize] {
                for &x in &x_layer[f.pow(y, q + 1) as usize] {
                    out.push(AffinePlace([x, y, z]));
                }
            }
            out
        })
        .collect()
}

pub(crate) fn satisfies(f: &Gf, desc: &CurveDescriptor, pt: &AffinePlace) -> bool {
    let q = desc.q as u128;
    let [x, y, z] = pt.0;
    f.pow(y, q + 1) == f.add(f.pow(x, q), x) && f.pow(z, desc.m as u128) == f.sub(f.pow(y, q * q), y)
}

/// Rank of the 2x3 Jacobian is 2.
pub(crate) fn rank_two(r1: [Elem; 3], r2: [Elem; 3], f: &Gf) -> bool {
    let minor = |i: usize, j: usize| f.sub(f.mul(r1[i], r2[j]), f.mul(r1[j], r2[i]));
    minor(0, 1) != 0 || minor(0, 2) != 0 || minor(1, 2) != 0
}

pub(crate) fn is_nonsingular(f: &Gf, desc: &CurveDescriptor, pt: &AffinePlace) -> bool {
    let q = desc.q;
    let [x, y, z] = pt.0;
    let c = |n: u64| f.from_int((n % f.p() as u64) as i64);
    // F1 = Y^{q+1} - X^q - X, F2 = Z^m - Y^{q^2} + Y
    let r1 = [
        f.neg(f.add(f.mul(c(q), f.pow(x, q as u128 - 1)), 1)),
        f.mul(c(q + 1), f.pow(y, q as u128)),
        0,
    ];
    let r2 = [
        0,
        f.sub(1, f.mul(c(q * q), f.pow(y, (q * q) as u128 - 1))),
        f.mul(c(desc.m), f.pow(z, desc.m as u128 - 1)),
    ];
    rank_two(r1, r2, f)
}

/// Ascending field elements `xi` with `sum_{i<terms} (xi^m)^{q^{2i}} = 0`.
pub(crate) fn a_set_by_trace(f: &Gf, desc: &CurveDescriptor, terms: u32) -> Vec<Elem> {
    f.all_elements()
        .filter(|&xi| trace_like(f, f.pow(xi, desc.m as u128), desc.q, terms) == 0)
        .collect()
}

/// Split polynomial of the GGS/ABQ construction:
/// `Z + sum_i Z^{1 + c(sum_{j<=i} q^{2j} + sum_{j<k} q^{2j+1})} + sum_i Z^{1 + c sum_{j<=i} q^{2j+1}}`
/// with `c = (q^n+1)(q-1)` and `k = (n-1)/2`.
pub(crate) fn split_polynomial_terms(q: u64, n: u32) -> Vec<(u64, i64)> {
    let k = (n - 1) / 2;
    let c = (q.pow(n) + 1) * (q - 1);
    let odd_total: u64 = (0..k).map(|j| q.pow(2 * j + 1)).sum();
    let mut terms = vec![(1, 1)];
    for i in 0..k {
        let even: u64 = (0..=i).map(|j| q.pow(2 * j)).sum();
        let odd: u64 = (0..=i).map(|j| q.pow(2 * j + 1)).sum();
        terms.push((1 + c * (even + odd_total), 1));
        terms.push((1 + c * odd, 1));
    }
    terms.sort_unstable();
    terms
}

/// `1 + Z^{qc} + sum_{1<=i<k} Z^{c sum_{j<=i} q^{2j+1}}`
pub(crate) fn split_derivative_terms(q: u64, n: u32) -> Vec<(u64, i64)> {
    let k = (n - 1) / 2;
    let c = (q.pow(n) + 1) * (q - 1);
    let mut terms = vec![(0, 1), (q * c, 1)];
    for i in 1..k {
        let odd: u64 = (0..=i).map(|j| q.pow(2 * j + 1)).sum();
        terms.push((c * odd, 1));
    }
    terms.sort_unstable();
    terms
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_polynomial_small_cases() {
        // n = 3 reproduces the GK(2) polynomial
        assert_eq!(split_polynomial_terms(2, 3), vec![(1, 1), (19, 1), (28, 1)]);
        assert_eq!(split_derivative_terms(2, 3), vec![(0, 1), (18, 1)]);
        assert_eq!(
            split_polynomial_terms(2, 5),
            vec![(1, 1), (67, 1), (331, 1), (364, 1), (496, 1)]
        );
        assert_eq!(split_derivative_terms(2, 5), vec![(0, 1), (66, 1), (330, 1)]);
    }

    #[test]
    fn preimage_table_partitions_field() {
        let f = crate::field::build_field(2, 6, None).unwrap();
        let t = preimages(&f, |x| f.add(f.pow(x, 2), x));
        assert_eq!(t.iter().map(Vec::len).sum::<usize>(), 64);
        // x^2 + x is 2-to-1 onto the trace-zero hyperplane
        assert_eq!(t.iter().filter(|v| !v.is_empty()).count(), 32);
        assert!(t.iter().all(|v| v.is_empty() || v.len() == 2));
    }
}

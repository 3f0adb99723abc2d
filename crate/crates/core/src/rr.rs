//! Monomial bases of Riemann-Roch spaces supported at the infinite places.

use rayon::prelude::*;
use serde::Serialize;

use crate::curve::{AffinePlace, CurveDescriptor};
use crate::error::{Error, Result};
use crate::field::{Elem, Gf};
use crate::linalg::{Echelon, Matrix};

/// `x^a y^b z^c`, stored as `exps = [a, b, c]` in coordinate order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct MonomialFn {
    pub exps: [u32; 3],
    /// Pole order at each infinite place (the same at all of them).
    pub pole: u64,
}

impl MonomialFn {
    pub fn new(desc: &CurveDescriptor, exps: [u32; 3]) -> Self {
        let pole = exps.iter().zip(&desc.infinite.pole_orders).map(|(&e, &p)| e as u64 * p).sum();
        Self { exps, pole }
    }

    pub fn per_place_poles(&self, desc: &CurveDescriptor) -> Vec<u64> {
        vec![self.pole; desc.infinite.count]
    }

    /// Exponents listed in the family's tower order.
    pub fn tower_exps(&self, desc: &CurveDescriptor) -> Vec<u32> {
        desc.tower_order.iter().map(|&i| self.exps[i]).collect()
    }

    pub fn display(&self, desc: &CurveDescriptor) -> String {
        const NAMES: [&str; 3] = ["x", "y", "z"];
        let parts: Vec<String> = desc
            .tower_order
            .iter()
            .filter(|&&i| self.exps[i] > 0)
            .map(|&i| match self.exps[i] {
                1 => NAMES[i].to_string(),
                e => format!("{}^{e}", NAMES[i]),
            })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

/// `G = s (P_1 + ... + P_r)` over the infinite places.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DivisorSpec {
    pub s: u64,
    pub places: usize,
}

impl DivisorSpec {
    pub fn at_infinity(desc: &CurveDescriptor, s: u64) -> Self {
        Self { s, places: desc.infinite.count }
    }

    pub fn degree(&self) -> u64 {
        self.s * self.places as u64
    }
}

/// Reduced monomials with pole order at most `s` at every infinite place,
/// sorted by pole order and then by tower-order exponents.
pub fn candidate_monomials(desc: &CurveDescriptor, g: &DivisorSpec) -> Vec<MonomialFn> {
    let poles = &desc.infinite.pole_orders;
    let mut out = Vec::new();
    let mut exps = [0u32; 3];
    fn walk(
        desc: &CurveDescriptor,
        poles: &[u64],
        i: usize,
        budget: u64,
        exps: &mut [u32; 3],
        out: &mut Vec<MonomialFn>,
    ) {
        if i == 3 {
            out.push(MonomialFn::new(desc, *exps));
            return;
        }
        let cap = match (desc.reduction_bounds[i], poles[i]) {
            (Some(b), 0) => b as u64,
            (Some(b), p) => (b as u64).min(budget / p),
            (None, p) => {
                assert!(p > 0, "unbounded coordinate without a pole");
                budget / p
            }
        };
        for e in 0..=cap {
            exps[i] = e as u32;
            walk(desc, poles, i + 1, budget - e * poles[i], exps, out);
        }
        exps[i] = 0;
    }
    walk(desc, poles, 0, g.s, &mut exps, &mut out);
    out.sort_by_cached_key(|m| (m.pole, m.tower_exps(desc)));
    if desc.infinite.count == 1 {
        assert!(
            out.windows(2).all(|w| w[0].pole < w[1].pole),
            "{}: two reduced monomials share a pole order",
            desc.label()
        );
    }
    out
}

/// Evaluates monomials at a fixed list of places via discrete logarithms.
pub struct Evaluator<'a> {
    field: &'a Gf,
    /// `None` marks a zero coordinate.
    logs: Vec<[Option<u32>; 3]>,
}

impl<'a> Evaluator<'a> {
    pub fn new(field: &'a Gf, places: &[AffinePlace]) -> Self {
        let logs = places.iter().map(|p| p.0.map(|c| field.log(c))).collect();
        Self { field, logs }
    }

    pub fn len(&self) -> usize {
        self.logs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.logs.is_empty()
    }

    pub fn eval(&self, mono: &MonomialFn) -> Vec<Elem> {
        self.logs
            .iter()
            .map(|logs| {
                let mut acc = 0u64;
                for (&e, l) in mono.exps.iter().zip(logs) {
                    if e == 0 {
                        continue;
                    }
                    match l {
                        Some(l) => acc += e as u64 * *l as u64,
                        None => return 0,
                    }
                }
                self.field.exp(acc)
            })
            .collect()
    }
}

/// Selected monomials and their evaluation vectors.
#[derive(Clone, Debug)]
pub struct Basis {
    pub monomials: Vec<MonomialFn>,
    pub evaluations: Matrix,
}

impl Basis {
    pub fn dimension(&self) -> usize {
        self.monomials.len()
    }

    /// Number of basis functions with pole order at most `s`.
    pub fn dimension_at(&self, s: u64) -> usize {
        self.monomials.partition_point(|m| m.pole <= s)
    }
}

/// Greedy rank extension over [`candidate_monomials`] in canonical order.
///
/// Above the canonical degree the achieved dimension must equal
/// `deg G + 1 - g`; anything else means the candidates do not span `L(G)`.
pub fn select_basis(desc: &CurveDescriptor, g: &DivisorSpec, field: &Gf, places: &[AffinePlace]) -> Result<Basis> {
    let deg_g = g.degree();
    if deg_g >= places.len() as u64 {
        return Err(Error::DivisorTooLarge { deg_g, deg_d: places.len() as u64 });
    }
    let candidates = candidate_monomials(desc, g);
    let ev = Evaluator::new(field, places);
    let rows: Vec<Vec<Elem>> = candidates.par_iter().map(|m| ev.eval(m)).collect();

    let mut echelon = Echelon::new(places.len());
    let mut monomials = Vec::new();
    let mut evaluations = Matrix::empty(places.len());
    for (m, row) in candidates.iter().zip(&rows) {
        if echelon.insert(field, row) {
            monomials.push(*m);
            evaluations.push_row(row);
        }
    }
    if deg_g as i64 > desc.canonical_degree() {
        let required = (deg_g + 1 - desc.genus) as usize;
        if monomials.len() != required {
            return Err(Error::DimensionShortfall { achieved: monomials.len(), required });
        }
    }
    Ok(Basis { monomials, evaluations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{make_descriptor, CurveInstance};

    #[test]
    fn gk2_canonical_candidates_match_semigroup() {
        let d = make_descriptor("gk", 2, None).unwrap();
        let c = candidate_monomials(&d, &DivisorSpec::at_infinity(&d, 18));
        let poles: Vec<u64> = c.iter().map(|m| m.pole).collect();
        // elements of <6, 8, 9> up to 18
        assert_eq!(poles, vec![0, 6, 8, 9, 12, 14, 15, 16, 17, 18]);
    }

    #[test]
    fn abq_candidates() {
        let d = make_descriptor("abq", 2, Some(3)).unwrap();
        let c = candidate_monomials(&d, &DivisorSpec::at_infinity(&d, 4));
        assert_eq!(c.iter().map(|m| m.pole).collect::<Vec<_>>(), vec![0, 3, 4]);
        assert_eq!(c[1].display(&d), "y");
        assert_eq!(c[2].display(&d), "x");
    }

    #[test]
    fn zero_divisor_gives_constants() {
        for (fam, n) in [("gk", None), ("abq", Some(3)), ("ggk2", Some(3)), ("ggs", Some(5))] {
            let d = make_descriptor(fam, 2, n).unwrap();
            let c = candidate_monomials(&d, &DivisorSpec::at_infinity(&d, 0));
            assert_eq!(c.len(), 1);
            assert_eq!(c[0].exps, [0, 0, 0]);
        }
    }

    #[test]
    fn rank_contract_gk2() {
        let inst = CurveInstance::build(make_descriptor("gk", 2, None).unwrap()).unwrap();
        let d = &inst.descriptor;
        let b = select_basis(d, &DivisorSpec::at_infinity(d, 20), &inst.field, &inst.places).unwrap();
        assert_eq!(b.dimension(), 11);
        assert_eq!(b.evaluations.rank(&inst.field), 11);
        assert_eq!(b.dimension_at(18), 10);
        let err = select_basis(d, &DivisorSpec::at_infinity(d, 224), &inst.field, &inst.places);
        assert!(matches!(err, Err(Error::DivisorTooLarge { .. })));
    }

    #[test]
    fn wrong_pole_data_breaks_the_contract() {
        let inst = CurveInstance::build(make_descriptor("abq", 2, Some(3)).unwrap()).unwrap();
        let mut d = inst.descriptor.clone();
        d.infinite.pole_orders = vec![4, 5, 0];
        let r = select_basis(&d, &DivisorSpec::at_infinity(&d, 10), &inst.field, &inst.places);
        assert!(matches!(r, Err(Error::DimensionShortfall { .. })));
    }
}

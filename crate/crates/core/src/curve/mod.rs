//! Curve families, rational-place enumeration and maximality checks.
//!
//! Each family is a [`CurveFamily`] strategy registered by name in
//! [`registry`]; everything downstream (A-sets, bases, codes, tables) only
//! talks to the trait object carried by a [`CurveDescriptor`].

mod abq;
pub mod cache;
mod ggk2;
mod ggs;
mod gk;
mod tower;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{build_field, is_prime, Elem, Gf};

pub use abq::Abq;
pub use ggk2::Ggk2;
pub use ggs::Ggs;
pub use gk::Gk;

/// An affine rational point `(x, y, z)`. Two-coordinate models (ABQ) leave
/// `z = 0`; see [`CurveDescriptor::arity`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AffinePlace(pub [Elem; 3]);

impl AffinePlace {
    pub fn coord(&self, i: usize) -> Elem {
        self.0[i]
    }
}

/// Places at infinity and the pole orders of the coordinate functions there.
/// All families here have the same pole order at every infinite place.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InfinitePlaceData {
    pub count: usize,
    /// Pole order of each coordinate function (x, y, z order) at each place.
    pub pole_orders: Vec<u64>,
}

impl InfinitePlaceData {
    pub fn per_place(&self) -> Vec<Vec<u64>> {
        vec![self.pole_orders.clone(); self.count]
    }
}

/// Distance column semantics of a printed theorem.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DistanceKind {
    Exact,
    LowerBound,
    /// Printed without "at least"; stored as printed.
    AsPrinted,
}

impl DistanceKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            DistanceKind::Exact => "exact",
            DistanceKind::LowerBound => "lower-bound",
            DistanceKind::AsPrinted => "as-printed",
        }
    }
}

/// One row of a family's closed-form quantum code theorem.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoremRow {
    pub s: u64,
    pub n: u64,
    pub k: i64,
    pub d: i64,
    pub d_kind: DistanceKind,
}

/// A curve family strategy.
pub trait CurveFamily: fmt::Debug + Send + Sync {
    /// Registry key, e.g. `"gk"`.
    fn name(&self) -> &'static str;

    /// Validates `(q, n)` and fills in every derived constant.
    fn describe(&self, q: u64, n: Option<u32>) -> Result<CurveDescriptor>;

    /// All affine rational points, in any order.
    fn enumerate(&self, f: &Gf, desc: &CurveDescriptor) -> Vec<AffinePlace>;

    /// Whether a point satisfies the defining equations.
    fn satisfies(&self, f: &Gf, desc: &CurveDescriptor, pt: &AffinePlace) -> bool;

    /// Jacobian rank test on the affine model.
    fn is_nonsingular(&self, f: &Gf, desc: &CurveDescriptor, pt: &AffinePlace) -> bool;

    /// Fibre values selected by the family's algebraic criterion, ascending.
    fn a_set_by_condition(&self, f: &Gf, desc: &CurveDescriptor) -> Result<Vec<Elem>>;

    /// Closed-form size of the A-set, where one is known.
    fn a_set_size(&self, desc: &CurveDescriptor) -> Option<u64>;

    /// Whether the zero fibre is excluded from the A-set even when full.
    fn excludes_zero_fibre(&self) -> bool {
        false
    }

    /// Printed split polynomial `f` as `(exponent, integer coefficient)` terms.
    fn closed_form_f(&self, desc: &CurveDescriptor) -> Option<Vec<(u64, i64)>>;

    /// Printed derivative `f'`.
    fn closed_form_f_prime(&self, desc: &CurveDescriptor) -> Option<Vec<(u64, i64)>>;

    /// Admissible range of `s` in the family's quantum code theorem.
    fn theorem_range(&self, desc: &CurveDescriptor) -> Option<(u64, u64)>;

    /// Closed-form parameters of the theorem row at `s`.
    fn theorem_row(&self, desc: &CurveDescriptor, s: u64) -> Option<TheoremRow>;

    /// Remarks attached to generated reports.
    fn notes(&self, _desc: &CurveDescriptor) -> Vec<String> {
        Vec::new()
    }
}

/// One family instance with all derived constants.
#[derive(Clone, Debug)]
pub struct CurveDescriptor {
    pub family: &'static dyn CurveFamily,
    pub q: u64,
    pub n: u32,
    /// Characteristic and degree over the prime field of the ambient field.
    pub p: u32,
    pub ambient_degree: u32,
    pub field_size: u64,
    pub m: u64,
    pub genus: u64,
    pub expected_places: u64,
    pub infinite: InfinitePlaceData,
    /// Number of affine coordinates (2 or 3).
    pub arity: usize,
    /// Index of the fibering coordinate (x = 0, y = 1, z = 2).
    pub fibering: usize,
    /// Number of places above each A-set value.
    pub fibre_size: u64,
    /// Maximum exponent of each coordinate in reduced monomials; `None` is unbounded.
    pub reduction_bounds: Vec<Option<u32>>,
    /// Coordinate order used to print and sort monomial exponents.
    pub tower_order: Vec<usize>,
}

impl CurveDescriptor {
    pub fn family_name(&self) -> &'static str {
        self.family.name()
    }

    pub fn build_field(&self) -> Result<Gf> {
        build_field(self.p, self.ambient_degree, None)
    }

    /// Square root of the ambient field size.
    pub fn sqrt_field_size(&self) -> u64 {
        self.q.pow(self.n)
    }

    /// `|F| + 2 g sqrt|F| + 1`.
    pub fn hasse_weil_bound(&self) -> u64 {
        self.field_size + 2 * self.genus * self.sqrt_field_size() + 1
    }

    /// `2g - 2`
    pub fn canonical_degree(&self) -> i64 {
        2 * self.genus as i64 - 2
    }

    pub fn fibre_pole_order(&self) -> u64 {
        self.infinite.pole_orders[self.fibering]
    }

    pub fn label(&self) -> String {
        format!("{}(q={}, n={})", self.family_name(), self.q, self.n)
    }
}

/// Name-indexed table of curve family strategies.
pub struct Registry {
    families: BTreeMap<&'static str, &'static dyn CurveFamily>,
}

impl Registry {
    pub fn get(&self, name: &str) -> Result<&'static dyn CurveFamily> {
        self.families
            .get(name.to_ascii_lowercase().as_str())
            .copied()
            .ok_or_else(|| Error::UnknownFamily(name.to_string()))
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.families.keys().copied()
    }
}

pub fn registry() -> &'static Registry {
    static REGISTRY: OnceLock<Registry> = OnceLock::new();
    REGISTRY.get_or_init(|| {
        let all: [&'static dyn CurveFamily; 4] = [&Gk, &Ggs, &Abq, &Ggk2];
        Registry { families: all.into_iter().map(|f| (f.name(), f)).collect() }
    })
}

pub fn make_descriptor(family: &str, q: u64, n: Option<u32>) -> Result<CurveDescriptor> {
    registry().get(family)?.describe(q, n)
}

/// `q = p^e`, or `None` if `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut e = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        e += 1;
    }
    (rest == 1 && is_prime(p)).then_some((p as u32, e))
}

pub(crate) fn invalid(family: &str, reason: impl Into<String>) -> Error {
    Error::InvalidParameters { family: family.to_string(), reason: reason.into() }
}

/// Parses q, checks the tower parameter and returns `(p, e)` with `q = p^e`.
pub(crate) fn check_q_n(family: &str, q: u64, n: u32, min_n: u32) -> Result<(u32, u32)> {
    let (p, e) = prime_power(q).ok_or_else(|| invalid(family, format!("q = {q} is not a prime power")))?;
    if n.is_multiple_of(2) {
        return Err(invalid(family, format!("n = {n} must be odd")));
    }
    if n < min_n {
        return Err(invalid(family, format!("n = {n} must be at least {min_n}")));
    }
    Ok((p, e))
}

/// All affine rational places in canonical order, verified point by point.
///
/// Fails if a point violates the equations, is singular, or if the total
/// count (affine plus infinite) differs from the descriptor's expectation.
pub fn enumerate_affine_places(f: &Gf, desc: &CurveDescriptor) -> Result<Vec<AffinePlace>> {
    let mut places = desc.family.enumerate(f, desc);
    places.par_sort_unstable();
    places.dedup();
    verify_places(f, desc, &places)?;
    let observed = places.len() as u64 + desc.infinite.count as u64;
    if observed != desc.expected_places {
        return Err(Error::PlaceCountMismatch {
            family: desc.label(),
            observed,
            expected: desc.expected_places,
        });
    }
    Ok(places)
}

pub(crate) fn verify_places(f: &Gf, desc: &CurveDescriptor, places: &[AffinePlace]) -> Result<()> {
    let bad = places.par_iter().find_any(|pt| {
        !desc.family.satisfies(f, desc, pt) || !desc.family.is_nonsingular(f, desc, pt)
    });
    match bad {
        Some(pt) if !desc.family.satisfies(f, desc, pt) => Err(Error::Inconsistent {
            what: format!("{} point {:?}", desc.label(), pt.0),
            computed: "violates the defining equations".into(),
            expected: "a point on the curve".into(),
        }),
        Some(pt) => Err(Error::SingularPoint(pt.0[..desc.arity].to_vec())),
        None => Ok(()),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct MaximalityReport {
    pub observed: u64,
    pub hasse_weil: u64,
    pub maximal: bool,
}

/// Compares an observed total place count to `|F| + 2g sqrt|F| + 1`.
pub fn maximality_check(desc: &CurveDescriptor, observed_total: u64) -> MaximalityReport {
    let hasse_weil = desc.hasse_weil_bound();
    MaximalityReport { observed: observed_total, hasse_weil, maximal: observed_total == hasse_weil }
}

/// A descriptor together with its field and verified place list.
#[derive(Clone, Debug)]
pub struct CurveInstance {
    pub descriptor: CurveDescriptor,
    pub field: Gf,
    pub places: Vec<AffinePlace>,
}

impl CurveInstance {
    pub fn build(descriptor: CurveDescriptor) -> Result<Self> {
        let field = descriptor.build_field()?;
        let places = enumerate_affine_places(&field, &descriptor)?;
        Ok(Self { descriptor, field, places })
    }

    pub fn total_places(&self) -> u64 {
        self.places.len() as u64 + self.descriptor.infinite.count as u64
    }

    pub fn maximality(&self) -> MaximalityReport {
        maximality_check(&self.descriptor, self.total_places())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(2), Some((2, 1)));
        assert_eq!(prime_power(4), Some((2, 2)));
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(6), None);
        assert_eq!(prime_power(1), None);
    }

    #[test]
    fn registry_lookup() {
        let names: Vec<_> = registry().names().collect();
        assert_eq!(names, ["abq", "ggk2", "ggs", "gk"]);
        assert_eq!(registry().get("GK").unwrap().name(), "gk");
        assert!(matches!(registry().get("suzuki"), Err(Error::UnknownFamily(_))));
    }

    #[test]
    fn descriptors() {
        let gk = make_descriptor("gk", 2, None).unwrap();
        assert_eq!((gk.genus, gk.m, gk.field_size, gk.expected_places), (10, 3, 64, 225));
        let abq = make_descriptor("abq", 2, Some(3)).unwrap();
        assert_eq!((abq.genus, abq.m, abq.field_size, abq.expected_places), (3, 3, 64, 113));
        let ggs = make_descriptor("ggs", 2, Some(5)).unwrap();
        assert_eq!((ggs.genus, ggs.m, ggs.field_size, ggs.expected_places), (46, 11, 1024, 3969));
        let ggk2 = make_descriptor("ggk2", 2, Some(3)).unwrap();
        assert_eq!((ggk2.genus, ggk2.m, ggk2.infinite.count), (10, 3, 3));
    }

    #[test]
    fn paper_counts_are_maximal() {
        for (fam, q, n) in [("gk", 2, None), ("gk", 3, None), ("gk", 4, None), ("ggs", 2, Some(5)),
            ("ggs", 3, Some(5)), ("abq", 2, Some(3)), ("abq", 3, Some(5)), ("ggs", 2, Some(7))]
        {
            let d = make_descriptor(fam, q, n).unwrap();
            assert_eq!(d.expected_places, d.hasse_weil_bound(), "{}", d.label());
        }
    }

    #[test]
    fn invalid_parameters() {
        assert!(make_descriptor("ggs", 2, Some(3)).is_err());
        assert!(make_descriptor("abq", 2, Some(4)).is_err());
        assert!(make_descriptor("abq", 6, Some(3)).is_err());
        assert!(make_descriptor("gk", 2, Some(5)).is_err());
        assert!(make_descriptor("ggk2", 2, Some(1)).is_err());
    }

    #[test]
    fn gk2_enumeration() {
        let inst = CurveInstance::build(make_descriptor("gk", 2, None).unwrap()).unwrap();
        assert_eq!(inst.places.len(), 224);
        let rep = inst.maximality();
        assert!(rep.maximal);
        assert_eq!(rep.observed, 225);
        assert!(inst.places.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn abq23_enumeration() {
        let inst = CurveInstance::build(make_descriptor("abq", 2, Some(3)).unwrap()).unwrap();
        assert_eq!(inst.places.len(), 112);
        assert!(inst.maximality().maximal);
    }

    #[test]
    fn ggk2_23_matches_gk2_count() {
        let inst = CurveInstance::build(make_descriptor("ggk2", 2, Some(3)).unwrap()).unwrap();
        assert_eq!(inst.places.len(), 222);
        assert_eq!(inst.total_places(), 225);
        assert!(inst.maximality().maximal);
    }

    #[test]
    fn wrong_genus_is_not_maximal() {
        let mut d = make_descriptor("gk", 2, None).unwrap();
        d.genus = 11;
        assert!(!maximality_check(&d, 225).maximal);
    }

    #[test]
    fn odd_characteristic_instances_are_maximal() {
        for (fam, n) in [("gk", None), ("abq", Some(3)), ("ggk2", Some(3))] {
            let inst = CurveInstance::build(make_descriptor(fam, 3, n).unwrap()).unwrap();
            assert!(inst.maximality().maximal, "{}", inst.descriptor.label());
        }
    }
}

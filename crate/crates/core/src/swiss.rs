//! The divisor data behind the self-orthogonality construction: the set of
//! fibre values `A`, the split polynomial `f = prod (Z - a)`, the evaluation
//! divisor `D`, and the integer data of the differential `f'(z)/f(z) dz`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::curve::{AffinePlace, CurveDescriptor, CurveInstance};
use crate::error::{Error, Result};
use crate::field::{Elem, Gf};
use crate::poly::Poly;

/// Fibre values computed by grouping places and by the family's algebraic
/// criterion. Disagreement is an error.
pub fn compute_a_set(inst: &CurveInstance) -> Result<Vec<Elem>> {
    let by_fibres = a_set_by_fibres(inst);
    let by_condition = inst.descriptor.family.a_set_by_condition(&inst.field, &inst.descriptor)?;
    if by_fibres != by_condition {
        return Err(Error::ASetDisagreement { by_fibres: by_fibres.len(), by_condition: by_condition.len() });
    }
    Ok(by_fibres)
}

fn fibre_counts(inst: &CurveInstance) -> BTreeMap<Elem, u64> {
    let mut counts = BTreeMap::new();
    for pt in &inst.places {
        *counts.entry(pt.coord(inst.descriptor.fibering)).or_insert(0) += 1;
    }
    counts
}

/// Fibering-coordinate values carrying a full fibre of rational places.
pub fn a_set_by_fibres(inst: &CurveInstance) -> Vec<Elem> {
    let desc = &inst.descriptor;
    let skip_zero = desc.family.excludes_zero_fibre();
    fibre_counts(inst)
        .into_iter()
        .filter(|&(a, c)| c == desc.fibre_size && !(skip_zero && a == 0))
        .map(|(a, _)| a)
        .collect()
}

#[derive(Clone, Debug)]
pub struct SwissData {
    pub descriptor: CurveDescriptor,
    pub field: Gf,
    pub a_set: Vec<Elem>,
    pub f: Poly,
    pub f_prime: Poly,
    /// Support of `D` in canonical place order.
    pub d_places: Vec<AffinePlace>,
    pub deg_d: u64,
    pub deg_m: u64,
    /// Coefficient of each infinite place in the divisor of the differential.
    pub omega_coeff: Vec<i64>,
    pub s_min: u64,
    pub s_max: u64,
}

pub fn build_swiss_data(inst: &CurveInstance) -> Result<SwissData> {
    let desc = &inst.descriptor;
    let field = &inst.field;
    let a_set = compute_a_set(inst)?;
    let f = Poly::product_from_roots(field, &a_set)?;
    let f_prime = f.derivative(field);
    if Poly::gcd(field, &f, &f_prime)? != Poly::constant(1) {
        return Err(inconsistent(desc, "gcd(f, f')", "nonconstant", "1"));
    }
    let fib = desc.fibering;
    let d_places: Vec<AffinePlace> =
        inst.places.iter().filter(|p| a_set.binary_search(&p.coord(fib)).is_ok()).copied().collect();
    let deg_d = d_places.len() as u64;
    let expected_d = a_set.len() as u64 * desc.fibre_size;
    if deg_d != expected_d {
        return Err(inconsistent(desc, "deg D", deg_d, expected_d));
    }

    let r = desc.infinite.count as i64;
    let rho = desc.fibre_pole_order() as i64;
    let deg_f = f.degree().unwrap_or(0) as i64;
    let deg_fp = f_prime.degree().ok_or_else(|| inconsistent(desc, "f'", "zero", "nonzero"))? as i64;
    let canonical = desc.canonical_degree();
    if canonical % r != 0 {
        return Err(inconsistent(desc, "(2g-2)/r", format!("{canonical}/{r}"), "an integer"));
    }
    let deg_m = (deg_fp * rho * r) as u64;
    let coeff = (deg_f - deg_fp) * rho + canonical / r;
    let omega_coeff = vec![coeff; r as usize];
    // the divisor of f'(z)/f(z) is principal
    let balance = deg_m as i64 - deg_d as i64 + omega_coeff.iter().sum::<i64>() - canonical;
    if balance != 0 {
        return Err(inconsistent(desc, "degree of the differential divisor minus 2g-2", balance, 0));
    }
    let s_max = (coeff / 2).max(0) as u64;
    let s_min = desc.family.theorem_range(desc).map_or((canonical / r).max(0) as u64, |(lo, _)| lo);

    Ok(SwissData {
        descriptor: desc.clone(),
        field: field.clone(),
        a_set,
        f,
        f_prime,
        d_places,
        deg_d,
        deg_m,
        omega_coeff,
        s_min,
        s_max,
    })
}

fn inconsistent(desc: &CurveDescriptor, what: &str, computed: impl ToString, expected: impl ToString) -> Error {
    Error::Inconsistent {
        what: format!("{}: {what}", desc.label()),
        computed: computed.to_string(),
        expected: expected.to_string(),
    }
}

/// Outcome of one named comparison.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, computed: impl ToString, expected: impl ToString) -> Self {
        let (c, e) = (computed.to_string(), expected.to_string());
        Check { name: name.into(), passed: c == e, detail: format!("computed {c}, expected {e}") }
    }
}

fn terms_to_poly(f: &Gf, terms: &[(u64, i64)]) -> Poly {
    let t: Vec<(usize, Elem)> = terms.iter().map(|&(e, c)| (e as usize, f.from_int(c))).collect();
    Poly::from_terms(f, &t)
}

impl SwissData {
    /// Comparisons against the family's closed forms (where it has them)
    /// and the theorem's admissible range.
    pub fn closed_form_checks(&self) -> Vec<Check> {
        let desc = &self.descriptor;
        let fam = desc.family;
        let mut checks = Vec::new();
        if let Some(size) = fam.a_set_size(desc) {
            checks.push(Check::new("A_size", self.a_set.len(), size));
        }
        if let Some(t) = fam.closed_form_f(desc) {
            checks.push(Check::new("f", &self.f, terms_to_poly(&self.field, &t)));
        }
        if let Some(t) = fam.closed_form_f_prime(desc) {
            checks.push(Check::new("fprime", &self.f_prime, terms_to_poly(&self.field, &t)));
        }
        if let Some((lo, hi)) = fam.theorem_range(desc) {
            checks.push(Check::new("s_min", self.s_min, lo));
            checks.push(Check::new("s_max", self.s_max, hi));
        }
        checks
    }

    pub fn report(&self) -> SwissReport {
        SwissReport {
            family: self.descriptor.family_name().to_string(),
            q: self.descriptor.q,
            n: self.descriptor.n,
            a_size: self.a_set.len(),
            f_coeffs: self.f.coeffs().to_vec(),
            fprime_coeffs: self.f_prime.coeffs().to_vec(),
            deg_d: self.deg_d,
            deg_m: self.deg_m,
            omega_coeff: self.omega_coeff.clone(),
            s_min: self.s_min,
            s_max: self.s_max,
            checks: self.closed_form_checks(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SwissReport {
    pub family: String,
    pub q: u64,
    pub n: u32,
    #[serde(rename = "A_size")]
    pub a_size: usize,
    pub f_coeffs: Vec<Elem>,
    pub fprime_coeffs: Vec<Elem>,
    #[serde(rename = "deg_D")]
    pub deg_d: u64,
    #[serde(rename = "deg_M")]
    pub deg_m: u64,
    pub omega_coeff: Vec<i64>,
    pub s_min: u64,
    pub s_max: u64,
    pub checks: Vec<Check>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimpleZeroReport {
    pub fibre_size: u64,
    pub all_fibres_full: bool,
    pub squarefree: bool,
    pub passed: bool,
}

/// Every `a` in `A` has exactly `fibre_size` distinct places above it and
/// `f` has no repeated roots, so each place of `D` is a simple zero of `z - a`.
pub fn simple_zero_certificate(swiss: &SwissData) -> SimpleZeroReport {
    let fib = swiss.descriptor.fibering;
    let mut counts: BTreeMap<Elem, u64> = swiss.a_set.iter().map(|&a| (a, 0)).collect();
    let mut distinct = true;
    for w in swiss.d_places.windows(2) {
        distinct &= w[0] != w[1];
    }
    for p in &swiss.d_places {
        if let Some(c) = counts.get_mut(&p.coord(fib)) {
            *c += 1;
        }
    }
    let all_fibres_full = distinct && counts.values().all(|&c| c == swiss.descriptor.fibre_size);
    let squarefree = Poly::gcd(&swiss.field, &swiss.f, &swiss.f_prime).is_ok_and(|g| g == Poly::constant(1));
    SimpleZeroReport {
        fibre_size: swiss.descriptor.fibre_size,
        all_fibres_full,
        squarefree,
        passed: all_fibres_full && squarefree,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::make_descriptor;

    fn swiss(fam: &str, n: Option<u32>) -> SwissData {
        let inst = CurveInstance::build(make_descriptor(fam, 2, n).unwrap()).unwrap();
        build_swiss_data(&inst).unwrap()
    }

    #[test]
    fn gk2_package() {
        let s = swiss("gk", None);
        assert_eq!(s.a_set.len(), 28);
        assert_eq!((s.deg_d, s.deg_m, s.omega_coeff.clone(), s.s_min, s.s_max), (224, 144, vec![98], 18, 49));
        assert!(s.closed_form_checks().iter().all(|c| c.passed));
        assert!(simple_zero_certificate(&s).passed);
    }

    #[test]
    fn abq23_package() {
        let s = swiss("abq", Some(3));
        assert_eq!((s.a_set.len(), s.deg_d, s.deg_m, s.omega_coeff[0], s.s_min, s.s_max), (28, 112, 72, 44, 4, 22));
        assert!(s.closed_form_checks().iter().all(|c| c.passed));
        assert_eq!(simple_zero_certificate(&s).fibre_size, 4);
    }

    #[test]
    fn ggk2_23_package() {
        let s = swiss("ggk2", Some(3));
        assert_eq!(s.a_set.len(), 36);
        assert_eq!((s.deg_d, s.deg_m, s.omega_coeff.clone(), s.s_max), (216, 156, vec![26, 26, 26], 13));
        assert!(s.closed_form_checks().iter().all(|c| c.passed), "{:?}", s.closed_form_checks());
        assert!(simple_zero_certificate(&s).passed);
    }

    #[test]
    fn ggk2_zero_fibre_is_full_but_excluded() {
        let inst = CurveInstance::build(make_descriptor("ggk2", 2, Some(3)).unwrap()).unwrap();
        assert_eq!(fibre_counts(&inst)[&0], 6);
        assert!(!a_set_by_fibres(&inst).contains(&0));
    }

    #[test]
    fn report_schema() {
        let v = serde_json::to_value(swiss("gk", None).report()).unwrap();
        for key in ["family", "q", "n", "A_size", "f_coeffs", "fprime_coeffs", "deg_D", "deg_M", "omega_coeff", "s_min", "s_max"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["A_size"], 28);
    }

    #[test]
    fn corrupted_package_fails_certificate() {
        let mut s = swiss("abq", Some(3));
        s.d_places.pop();
        assert!(!simple_zero_certificate(&s).passed);
    }
}

//! Dense univariate polynomials over a [`Gf`].

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::field::{Elem, Gf};

/// Coefficients in ascending degree with trailing zeros stripped.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Elem>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Elem>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Elem) -> Self {
        Self::new(vec![c])
    }

    /// `c * Z^deg`
    pub fn monomial(c: Elem, deg: usize) -> Self {
        let mut coeffs = vec![0; deg + 1];
        coeffs[deg] = c;
        Self::new(coeffs)
    }

    /// Sum of `c * Z^e` over the given terms.
    pub fn from_terms(f: &Gf, terms: &[(usize, Elem)]) -> Self {
        let deg = terms.iter().map(|t| t.0).max().unwrap_or(0);
        let mut coeffs = vec![0; deg + 1];
        for &(e, c) in terms {
            coeffs[e] = f.add(coeffs[e], c);
        }
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Elem {
        self.coeffs.last().copied().unwrap_or(0)
    }

    /// Exponents of the nonzero terms, ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.coeffs.len()).filter(|&i| self.coeffs[i] != 0).collect()
    }

    /// Monic polynomial whose roots are exactly `roots`.
    pub fn product_from_roots(f: &Gf, roots: &[Elem]) -> Result<Self> {
        let mut seen = HashSet::with_capacity(roots.len());
        for &r in roots {
            if !seen.insert(r) {
                return Err(Error::DuplicateRoot(r));
            }
        }
        let mut coeffs = Vec::with_capacity(roots.len() + 1);
        coeffs.push(1);
        for &r in roots {
            // multiply by (Z - r)
            let neg_r = f.neg(r);
            coeffs.push(0);
            for i in (0..coeffs.len()).rev() {
                let shifted = if i > 0 { coeffs[i - 1] } else { 0 };
                coeffs[i] = f.add(shifted, f.mul(coeffs[i], neg_r));
            }
        }
        Ok(Self::new(coeffs))
    }

    /// Formal derivative; the integer factor `i` is reduced mod p.
    pub fn derivative(&self, f: &Gf) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| f.mul(f.from_int(i as i64), c))
            .collect();
        Self::new(coeffs)
    }

    /// Horner evaluation.
    pub fn eval(&self, f: &Gf, x: Elem) -> Elem {
        self.coeffs.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// All roots in the ambient field by exhaustive scan, ascending.
    pub fn roots_in_field(&self, f: &Gf) -> Result<Vec<Elem>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(f.all_elements().filter(|&x| self.eval(f, x) == 0).collect())
    }

    pub fn add(&self, f: &Gf, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let get = |v: &[Elem], i: usize| v.get(i).copied().unwrap_or(0);
        Self::new((0..n).map(|i| f.add(get(&self.coeffs, i), get(&other.coeffs, i))).collect())
    }

    pub fn mul(&self, f: &Gf, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, f: &Gf, c: Elem) -> Self {
        Self::new(self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    /// Quotient and remainder of Euclidean division.
    pub fn div_rem(&self, f: &Gf, divisor: &Self) -> Result<(Self, Self)> {
        let dd = divisor.degree().ok_or(Error::ZeroPolynomial)?;
        let lead_inv = f.inv(divisor.leading())?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![0; rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = f.mul(rem[i], lead_inv);
            if c == 0 {
                continue;
            }
            quot[i - dd] = c;
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                let t = &mut rem[i - dd + j];
                *t = f.sub(*t, f.mul(c, d));
            }
        }
        rem.truncate(dd);
        Ok((Self::new(quot), Self::new(rem)))
    }

    pub fn make_monic(&self, f: &Gf) -> Self {
        match self.leading() {
            0 => Self::zero(),
            l => self.scale(f, f.inv(l).expect("nonzero leading coefficient")),
        }
    }

    /// Monic gcd by Euclid. `gcd(0, 0)` is an error.
    pub fn gcd(f: &Gf, a: &Self, b: &Self) -> Result<Self> {
        if a.is_zero() && b.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            let (_, r) = x.div_rem(f, &y)?;
            x = y;
            y = r;
        }
        Ok(x.make_monic(f))
    }
}

/// Text form: encodings of the coefficients, ascending, space-separated.
/// The zero polynomial prints as `0`.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for Poly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let coeffs = s
            .split_whitespace()
            .map(|t| t.parse::<Elem>().map_err(|_| Error::PolyParse(t.to_string())))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(coeffs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::build_field;

    fn gk_f(f: &Gf) -> Poly {
        Poly::from_terms(f, &[(28, 1), (19, 1), (1, 1)])
    }

    #[test]
    fn derivative_of_gk_polynomial() {
        let f = build_field(2, 6, None).unwrap();
        assert_eq!(gk_f(&f).derivative(&f), Poly::from_terms(&f, &[(18, 1), (0, 1)]));
        assert!(Poly::constant(5).derivative(&f).is_zero());
    }

    #[test]
    fn gk_polynomial_has_28_simple_roots() {
        let f = build_field(2, 6, None).unwrap();
        let p = gk_f(&f);
        let roots = p.roots_in_field(&f).unwrap();
        assert_eq!(roots.len(), 28);
        assert_eq!(roots[0], 0);
        let g = Poly::gcd(&f, &p, &p.derivative(&f)).unwrap();
        assert_eq!(g, Poly::constant(1));
        assert_eq!(Poly::product_from_roots(&f, &roots).unwrap(), p);
    }

    #[test]
    fn small_cases() {
        let f4 = build_field(2, 2, None).unwrap();
        let p = Poly::from_terms(&f4, &[(2, 1), (0, 1)]);
        assert_eq!(p.roots_in_field(&f4).unwrap(), vec![1]);
        assert_eq!(Poly::product_from_roots(&f4, &[0]).unwrap(), Poly::monomial(1, 1));
        assert!(matches!(Poly::product_from_roots(&f4, &[2, 2]), Err(Error::DuplicateRoot(2))));
        assert!(Poly::zero().roots_in_field(&f4).is_err());
    }

    #[test]
    fn gcd_cases() {
        let f = build_field(2, 6, None).unwrap();
        let p = Poly::from_terms(&f, &[(3, 5), (0, 7)]);
        assert_eq!(Poly::gcd(&f, &p, &Poly::zero()).unwrap(), p.make_monic(&f));
        let z2 = Poly::monomial(1, 2);
        let z3 = Poly::monomial(1, 3);
        assert_eq!(Poly::gcd(&f, &z2, &z3).unwrap(), z2);
        assert!(Poly::gcd(&f, &Poly::zero(), &Poly::zero()).is_err());
    }

    #[test]
    fn derivative_in_characteristic_three() {
        let f = build_field(3, 2, None).unwrap();
        // d/dZ (Z^3 + Z^2) = 2Z
        let p = Poly::from_terms(&f, &[(3, 1), (2, 1)]);
        assert_eq!(p.derivative(&f), Poly::monomial(2, 1));
    }

    #[test]
    fn text_form() {
        let p: Poly = "1 0 3 0 0".parse().unwrap();
        assert_eq!(p.to_string(), "1 0 3");
        assert_eq!(Poly::zero().to_string(), "0");
        assert!("1 x".parse::<Poly>().is_err());
    }

    #[test]
    fn div_rem_reconstructs() {
        let f = build_field(3, 2, None).unwrap();
        let a = Poly::new(vec![1, 2, 3, 4, 5, 6]);
        let b = Poly::new(vec![7, 0, 2]);
        let (q, r) = a.div_rem(&f, &b).unwrap();
        assert!(r.degree().is_none_or(|d| d < 2));
        assert_eq!(q.mul(&f, &b).add(&f, &r), a);
    }
}

//! Finite fields GF(p^k) with log/antilog tables.
//!
//! Elements are encoded as integers `enc(e) = sum c_i p^i` where `c_i` are the
//! coefficients of the residue-class polynomial. The hot-path API works on raw
//! encodings ([`Elem`]) through a shared [`Gf`] context; [`FieldElement`] is a
//! checked handle that carries its field for callers that want cross-field
//! misuse reported as an error.

mod element;
mod moduli;

pub use element::FieldElement;
pub use moduli::{default_modulus, parse_moduli, DEFAULT_MODULI};

use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Integer encoding of a field element.
pub type Elem = u32;

const NO_LOG: u32 = u32::MAX;

/// Characteristic, extension degree and monic modulus of a field.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FieldSpec {
    pub p: u32,
    pub k: u32,
    /// `k + 1` coefficients in ascending degree, last one equal to 1.
    pub modulus: Vec<u32>,
}

impl FieldSpec {
    pub fn size(&self) -> u32 {
        self.p.pow(self.k)
    }

    /// Short stable fingerprint of the modulus, used to tag cache files.
    pub fn modulus_hash(&self) -> String {
        let mut h = Sha256::new();
        h.update(format!("{} {} =", self.p, self.k));
        for c in &self.modulus {
            h.update(format!(" {c}"));
        }
        let digest = h.finalize();
        digest[..8].iter().map(|b| format!("{b:02x}")).collect()
    }
}

struct Tables {
    spec: FieldSpec,
    size: u32,
    /// `exp[i] = g^i` for `0 <= i < 2 (size - 1)`, doubled to skip a reduction.
    exp: Vec<u32>,
    log: Vec<u32>,
    /// Zech logarithms `log(1 + g^d)` for odd characteristic.
    zech: Vec<u32>,
    log_neg_one: u32,
}

/// An immutable finite-field context. Cloning is cheap.
#[derive(Clone)]
pub struct Gf(Arc<Tables>);

impl fmt::Debug for Gf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.p(), self.k())
    }
}

impl PartialEq for Gf {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.spec == other.0.spec
    }
}

impl Eq for Gf {}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Builds GF(p^k). Without an explicit modulus the shipped default is used.
pub fn build_field(p: u32, k: u32, modulus: Option<&[u32]>) -> Result<Gf> {
    if !is_prime(p as u64) {
        return Err(Error::NotPrime(p as u64));
    }
    if k == 0 {
        return Err(Error::ZeroDegree);
    }
    if (p as u64).checked_pow(k).is_none_or(|s| s > 1 << 16) {
        return Err(Error::FieldTooLarge { p: p as u64, k });
    }
    let modulus = match modulus {
        Some(m) => m.to_vec(),
        None => default_modulus(p, k)?,
    };
    Gf::new(FieldSpec { p, k, modulus })
}

impl Gf {
    pub fn new(spec: FieldSpec) -> Result<Self> {
        let FieldSpec { p, k, ref modulus } = spec;
        if modulus.len() != k as usize + 1 || *modulus.last().unwrap() != 1 {
            return Err(Error::BadModulusDegree { expected: k, got: modulus.len() });
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::BadModulusDegree { expected: k, got: modulus.len() });
        }
        if !is_irreducible(modulus, p) {
            return Err(Error::ReducibleModulus { p: p as u64 });
        }
        let size = p.pow(k);
        let order = size - 1;
        let slow = SlowArith { p, k, modulus };

        let generator = generator_candidates(p, size)
            .find(|&g| slow.multiplicative_order(g) == order)
            .expect("the multiplicative group of a finite field is cyclic");

        let mut exp = vec![0u32; 2 * order.max(1) as usize];
        let mut log = vec![NO_LOG; size as usize];
        let mut cur = 1u32;
        for i in 0..order {
            exp[i as usize] = cur;
            log[cur as usize] = i;
            cur = slow.mul(cur, generator);
        }
        for i in order..2 * order {
            exp[i as usize] = exp[(i - order) as usize];
        }
        if order == 1 {
            // GF(2): the doubled table is [1, 1].
            exp.fill(1);
        }

        let mut zech = Vec::new();
        if p != 2 {
            zech = (0..order)
                .map(|d| {
                    let s = slow.add(1, exp[d as usize]);
                    if s == 0 {
                        NO_LOG
                    } else {
                        log[s as usize]
                    }
                })
                .collect();
        }
        let log_neg_one = if p == 2 { 0 } else { order / 2 };

        Ok(Gf(Arc::new(Tables { spec, size, exp, log, zech, log_neg_one })))
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.0.spec
    }

    pub fn p(&self) -> u32 {
        self.0.spec.p
    }

    pub fn k(&self) -> u32 {
        self.0.spec.k
    }

    pub fn size(&self) -> u32 {
        self.0.size
    }

    /// Multiplicative group order `size - 1`.
    pub fn order(&self) -> u32 {
        self.0.size - 1
    }

    pub fn zero(&self) -> Elem {
        0
    }

    pub fn one(&self) -> Elem {
        1
    }

    pub fn contains(&self, a: Elem) -> bool {
        a < self.0.size
    }

    /// Validates an encoding and wraps it in a checked handle.
    pub fn element(&self, enc: u64) -> Result<FieldElement<'_>> {
        if enc >= self.0.size as u64 {
            return Err(Error::ElementOutOfRange { enc, size: self.0.size });
        }
        Ok(FieldElement::new(self, enc as Elem))
    }

    /// All elements in ascending encoding order.
    pub fn all_elements(&self) -> impl Iterator<Item = Elem> + Clone {
        0..self.0.size
    }

    /// Discrete logarithm to the table generator, `None` for zero.
    #[inline]
    pub fn log(&self, a: Elem) -> Option<u32> {
        let l = self.0.log[a as usize];
        (l != NO_LOG).then_some(l)
    }

    /// `g^i` for any `i` (reduced modulo the group order).
    #[inline]
    pub fn exp(&self, i: u64) -> Elem {
        self.0.exp[(i % self.order() as u64) as usize]
    }

    /// Generator used for the log tables.
    pub fn generator(&self) -> Elem {
        self.0.exp[1 % self.0.exp.len()]
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.0.spec.p == 2 {
            return a ^ b;
        }
        if a == 0 {
            return b;
        }
        if b == 0 {
            return a;
        }
        let t = &*self.0;
        let (la, lb) = (t.log[a as usize], t.log[b as usize]);
        let order = t.size - 1;
        let d = if lb >= la { lb - la } else { lb + order - la };
        match t.zech[d as usize] {
            NO_LOG => 0,
            z => t.exp[(la + z) as usize],
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        if self.0.spec.p == 2 || a == 0 {
            return a;
        }
        let t = &*self.0;
        t.exp[(t.log[a as usize] + t.log_neg_one) as usize]
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a == 0 || b == 0 {
            return 0;
        }
        let t = &*self.0;
        t.exp[(t.log[a as usize] + t.log[b as usize]) as usize]
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        let t = &*self.0;
        let order = t.size - 1;
        Ok(t.exp[((order - t.log[a as usize]) % order) as usize])
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Square-and-multiply exponentiation; `0^0 = 1`.
    pub fn pow(&self, a: Elem, mut e: u128) -> Elem {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Embeds an integer through the prime subfield.
    pub fn from_int(&self, n: i64) -> Elem {
        let p = self.p() as i64;
        n.rem_euclid(p) as Elem
    }

    /// Multiplicative order of a nonzero element.
    pub fn multiplicative_order(&self, a: Elem) -> Option<u32> {
        let l = self.log(a)?;
        let order = self.order();
        Some(order / gcd(order, l))
    }

    /// Coefficient digits of an element, ascending.
    pub fn digits(&self, a: Elem) -> Vec<u32> {
        let p = self.p();
        let mut a = a;
        (0..self.k())
            .map(|_| {
                let d = a % p;
                a /= p;
                d
            })
            .collect()
    }

    /// `dst += c * src` elementwise.
    pub fn axpy(&self, dst: &mut [Elem], c: Elem, src: &[Elem]) {
        if c == 0 {
            return;
        }
        let t = &*self.0;
        let lc = t.log[c as usize];
        if t.spec.p == 2 {
            for (d, &s) in dst.iter_mut().zip(src) {
                if s != 0 {
                    *d ^= t.exp[(lc + t.log[s as usize]) as usize];
                }
            }
        } else {
            for (d, &s) in dst.iter_mut().zip(src) {
                if s != 0 {
                    *d = self.add(*d, t.exp[(lc + t.log[s as usize]) as usize]);
                }
            }
        }
    }

    /// `v *= c` elementwise.
    pub fn scale_in_place(&self, v: &mut [Elem], c: Elem) {
        for a in v.iter_mut() {
            *a = self.mul(*a, c);
        }
    }

    /// Standard bilinear form `sum a_i b_i`.
    pub fn dot(&self, a: &[Elem], b: &[Elem]) -> Elem {
        let t = &*self.0;
        let mut acc = 0;
        for (&x, &y) in a.iter().zip(b) {
            if x != 0 && y != 0 {
                let prod = t.exp[(t.log[x as usize] + t.log[y as usize]) as usize];
                acc = if t.spec.p == 2 { acc ^ prod } else { self.add(acc, prod) };
            }
        }
        acc
    }
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn generator_candidates(p: u32, size: u32) -> impl Iterator<Item = u32> {
    // The residue of `x` (encoding p) is primitive for the shipped moduli.
    let first = (p < size).then_some(p);
    first.into_iter().chain((1..size).filter(move |&g| g != p))
}

/// Digit-vector arithmetic used only while building tables.
struct SlowArith<'a> {
    p: u32,
    k: u32,
    modulus: &'a [u32],
}

impl SlowArith<'_> {
    fn digits(&self, mut a: u32) -> Vec<u32> {
        (0..self.k)
            .map(|_| {
                let d = a % self.p;
                a /= self.p;
                d
            })
            .collect()
    }

    fn undigits(&self, d: &[u32]) -> u32 {
        d.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    fn add(&self, a: u32, b: u32) -> u32 {
        let (da, db) = (self.digits(a), self.digits(b));
        let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect();
        self.undigits(&s)
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        let (p, k) = (self.p, self.k as usize);
        let (da, db) = (self.digits(a), self.digits(b));
        let mut prod = vec![0u32; 2 * k];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        for d in (k..2 * k).rev() {
            let c = prod[d];
            if c != 0 {
                for i in 0..=k {
                    let t = prod[d - k + i] + p * p - c * self.modulus[i] % p;
                    prod[d - k + i] = t % p;
                }
            }
        }
        self.undigits(&prod[..k])
    }

    fn multiplicative_order(&self, g: u32) -> u32 {
        let mut cur = g;
        let mut e = 1;
        while cur != 1 {
            cur = self.mul(cur, g);
            e += 1;
            if cur == 0 {
                return 0;
            }
        }
        e
    }
}

/// Trial division by every monic polynomial of degree `1..=deg/2` over GF(p).
pub(crate) fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    let deg = modulus.len() - 1;
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for enc in 0..count {
            let mut divisor: Vec<u32> = (0..d)
                .map(|i| ((enc / (p as u64).pow(i as u32)) % p as u64) as u32)
                .collect();
            divisor.push(1);
            if prime_poly_rem(modulus, &divisor, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn prime_poly_rem(a: &[u32], monic: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    let d = monic.len() - 1;
    while r.len() > d {
        let c = *r.last().unwrap();
        let shift = r.len() - 1 - d;
        if c != 0 {
            for (i, &m) in monic.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p - c * m % p) % p;
            }
        }
        r.pop();
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf64_group_order() {
        let f = build_field(2, 6, None).unwrap();
        assert_eq!(f.size(), 64);
        let units = f.all_elements().filter(|&a| f.pow(a, 63) == 1).count();
        assert_eq!(units, 63);
    }

    #[test]
    fn gf2_characteristic() {
        let f = build_field(2, 1, None).unwrap();
        assert_eq!(f.add(1, 1), 0);
        assert_eq!(f.size(), 2);
    }

    #[test]
    fn gf1024_encoding_is_bijective() {
        let f = build_field(2, 10, None).unwrap();
        let elems: Vec<_> = f.all_elements().collect();
        assert_eq!(elems.len(), 1024);
        for a in elems {
            let d = f.digits(a);
            let back = d.iter().rev().fold(0, |acc, &c| acc * 2 + c);
            assert_eq!(back, a);
        }
    }

    #[test]
    fn inverse_law_and_frobenius_gf64() {
        let f = build_field(2, 6, None).unwrap();
        for a in 1..64 {
            assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        }
        for a in 0..64 {
            assert_eq!(f.pow(a, 64), a);
        }
    }

    #[test]
    fn ninth_power_of_primitive_has_order_seven() {
        let f = build_field(2, 6, None).unwrap();
        let prim = f.all_elements().find(|&a| f.multiplicative_order(a) == Some(63)).unwrap();
        let b = f.pow(prim, 9);
        // exhaustive powering
        let mut e = 1;
        let mut cur = b;
        while cur != 1 {
            cur = f.mul(cur, b);
            e += 1;
        }
        assert_eq!(e, 7);
    }

    #[test]
    fn enumeration_order_and_sum() {
        let f = build_field(2, 6, None).unwrap();
        let v: Vec<_> = f.all_elements().collect();
        assert_eq!(v[0], 0);
        assert_eq!(v[1], 1);
        assert_eq!(v.iter().fold(0, |acc, &a| f.add(acc, a)), 0);
        let g = build_field(3, 6, None).unwrap();
        assert_eq!(g.all_elements().fold(0, |acc, a| g.add(acc, a)), 0);
    }

    #[test]
    fn errors() {
        assert!(matches!(build_field(4, 2, None), Err(Error::NotPrime(4))));
        // x^2 + 1 = (x + 1)^2 over GF(2)
        assert!(matches!(build_field(2, 2, Some(&[1, 0, 1])), Err(Error::ReducibleModulus { .. })));
        assert!(matches!(build_field(2, 3, Some(&[1, 1, 1])), Err(Error::BadModulusDegree { .. })));
        let f = build_field(2, 6, None).unwrap();
        assert!(matches!(f.inv(0), Err(Error::DivisionByZero)));
        assert!(f.element(64).is_err());
    }

    #[test]
    fn odd_characteristic_negation_and_subtraction() {
        let f = build_field(3, 6, None).unwrap();
        for a in f.all_elements() {
            assert_eq!(f.add(a, f.neg(a)), 0);
            let d = f.digits(a);
            let neg_digits: Vec<u32> = d.iter().map(|&c| (3 - c) % 3).collect();
            assert_eq!(f.digits(f.neg(a)), neg_digits);
        }
        assert_eq!(f.sub(5, 5), 0);
    }

    #[test]
    fn explicit_non_primitive_modulus_still_works() {
        // x^4 + x^3 + x^2 + x + 1 is irreducible but x has order 5.
        let f = build_field(2, 4, Some(&[1, 1, 1, 1, 1])).unwrap();
        assert_eq!(f.multiplicative_order(f.generator()), Some(15));
        for a in 1..16 {
            assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        }
    }
}

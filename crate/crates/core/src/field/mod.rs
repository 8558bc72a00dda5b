//! Exact arithmetic in GF(q), q = p^h.
//!
//! An element is stored as the integer `c_0 + c_1 p + ... + c_{h-1} p^{h-1}`
//! where `c_i` are its little-endian coordinates over GF(p) in the basis
//! `1, x, ..., x^{h-1}`. For prime fields this is the residue itself. The
//! integer order is also the enumeration order used by [`Field::elements`].
//!
//! Elements carry no reference to their field; every operation goes
//! through an explicit [`Field`].

mod conway;
mod linalg;

pub use linalg::{Echelon, Matrix, Nullspace};

use std::fmt;
use std::sync::Arc as Shared;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

/// Extension fields above this order are rejected (log tables are O(q)).
const MAX_EXTENSION_ORDER: u64 = 1 << 22;
/// Extension fields up to this order get a full addition table.
const ADD_TABLE_ORDER: u32 = 256;

/// A field element, encoded by its base-p coordinate integer.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fe(u32);

pub type FieldElement = Fe;

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

struct ExtTables {
    exp: Vec<u32>,
    log: Vec<u32>,
    neg: Vec<u32>,
    add: Option<Vec<u32>>,
}

struct Inner {
    p: u32,
    h: u32,
    q: u32,
    poly: Vec<u32>,
    ext: Option<ExtTables>,
}

/// A validated finite field GF(p^h) with its defining polynomial.
#[derive(Clone)]
pub struct Field {
    inner: Shared<Inner>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}; {:?})", self.p(), self.h(), self.irreducible())
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Shared::ptr_eq(&self.inner, &other.inner)
            || (self.p() == other.p() && self.h() == other.h() && self.irreducible() == other.irreducible())
    }
}

impl Eq for Field {}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q` into `(p, h)` with `q = p^h`, or `None` if `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2u64;
    while p * p <= q && !q.is_multiple_of(p) {
        p += 1;
    }
    if !q.is_multiple_of(p) {
        p = q;
    }
    let (mut rest, mut h) = (q, 0u32);
    while rest % p == 0 {
        rest /= p;
        h += 1;
    }
    (rest == 1).then_some((p, h))
}

// Dense polynomial helpers over GF(p), little-endian, no trailing-zero invariant.

fn poly_trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn poly_rem(p: u32, a: &[u32], monic: &[u32]) -> Vec<u32> {
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let d = monic.len() - 1;
    let p64 = p as u64;
    while r.len() > d {
        let lead = *r.last().unwrap() as u64;
        let shift = r.len() - 1 - d;
        for (i, &c) in monic.iter().enumerate() {
            let sub = lead * c as u64 % p64;
            let slot = &mut r[shift + i];
            *slot = ((*slot as u64 + p64 - sub) % p64) as u32;
        }
        poly_trim(&mut r);
    }
    r
}

fn poly_mulmod(p: u32, a: &[u32], b: &[u32], modulus: &[u32]) -> Vec<u32> {
    let p64 = p as u64;
    let mut prod = vec![0u32; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            let cur = prod[i + j] as u64 + x as u64 * y as u64;
            prod[i + j] = (cur % p64) as u32;
        }
    }
    poly_rem(p, &prod, modulus)
}

fn is_irreducible(p: u32, poly: &[u32]) -> bool {
    let h = poly.len() - 1;
    for d in 1..=h / 2 {
        let count = (p as u64).pow(d as u32);
        for lower in 0..count {
            let mut divisor = Vec::with_capacity(d + 1);
            let mut rest = lower;
            for _ in 0..d {
                divisor.push((rest % p as u64) as u32);
                rest /= p as u64;
            }
            divisor.push(1);
            if poly_rem(p, poly, &divisor).is_empty() {
                return false;
            }
        }
    }
    true
}

fn to_digits(p: u32, h: u32, mut index: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(h as usize);
    for _ in 0..h {
        out.push(index % p);
        index /= p;
    }
    out
}

fn from_digits(p: u32, digits: &[u32]) -> u32 {
    digits.iter().rev().fold(0, |acc, &d| acc * p + d)
}

impl ExtTables {
    fn build(p: u32, h: u32, q: u32, poly: &[u32]) -> Result<Self> {
        let order = q - 1;
        let (exp, log) = std::iter::once(p)
            .chain(2..q)
            .find_map(|g| Self::power_table(p, h, q, poly, g))
            .map(|exp| {
                let mut log = vec![0u32; q as usize];
                for (i, &e) in exp.iter().take(order as usize).enumerate() {
                    log[e as usize] = i as u32;
                }
                (exp, log)
            })
            .ok_or_else(|| Error::UnsupportedField("no primitive element found".into()))?;
        let neg: Vec<u32> = (0..q)
            .map(|a| {
                let d: Vec<u32> = to_digits(p, h, a).iter().map(|&c| (p - c) % p).collect();
                from_digits(p, &d)
            })
            .collect();
        let add = (q <= ADD_TABLE_ORDER && p != 2).then(|| {
            let mut table = vec![0u32; (q * q) as usize];
            for a in 0..q {
                let da = to_digits(p, h, a);
                for b in 0..q {
                    let db = to_digits(p, h, b);
                    let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                    table[(a * q + b) as usize] = from_digits(p, &s);
                }
            }
            table
        });
        Ok(ExtTables { exp, log, neg, add })
    }

    /// Powers g^0 .. g^{2(q-1)-1} if `g` is primitive.
    fn power_table(p: u32, h: u32, q: u32, poly: &[u32], g: u32) -> Option<Vec<u32>> {
        let order = (q - 1) as usize;
        let gd = to_digits(p, h, g);
        let mut exp = Vec::with_capacity(2 * order);
        let mut cur = vec![1u32];
        for i in 0..order {
            let mut padded = cur.clone();
            padded.resize(h as usize, 0);
            let idx = from_digits(p, &padded);
            if i > 0 && idx == 1 {
                return None;
            }
            exp.push(idx);
            cur = poly_mulmod(p, &cur, &gd, poly);
        }
        let mut padded = cur;
        padded.resize(h as usize, 0);
        if from_digits(p, &padded) != 1 {
            return None;
        }
        let first: Vec<u32> = exp.clone();
        exp.extend(first);
        Some(exp)
    }
}

impl Field {
    /// Builds GF(p^h). Without an explicit polynomial, extension fields use
    /// the built-in Conway table (all non-prime orders up to 256).
    pub fn new(p: u64, h: u32, irreducible: Option<&[u32]>) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p > (1 << 31) {
            return Err(Error::UnsupportedField(format!("characteristic {p} is too large")));
        }
        if h == 0 {
            return Err(Error::UnsupportedField("extension degree must be at least 1".into()));
        }
        let p32 = p as u32;
        if h == 1 {
            if let Some(poly) = irreducible {
                if poly != [0, 1] {
                    return Err(Error::InvalidPolynomial(format!(
                        "prime fields take the placeholder [0, 1], got {poly:?}"
                    )));
                }
            }
            let inner = Inner { p: p32, h: 1, q: p32, poly: vec![0, 1], ext: None };
            return Ok(Field { inner: Shared::new(inner) });
        }
        let q = p
            .checked_pow(h)
            .filter(|&q| q <= MAX_EXTENSION_ORDER)
            .ok_or_else(|| Error::UnsupportedField(format!("{p}^{h} exceeds {MAX_EXTENSION_ORDER}")))?
            as u32;
        let poly: Vec<u32> = match irreducible {
            Some(poly) => poly.to_vec(),
            None => conway::lookup(p32, h)
                .ok_or_else(|| Error::UnsupportedField(format!("no built-in polynomial for {p}^{h}; supply one")))?
                .to_vec(),
        };
        if poly.len() != h as usize + 1 {
            return Err(Error::InvalidPolynomial(format!("expected {} coefficients, got {}", h + 1, poly.len())));
        }
        if poly.iter().any(|&c| c >= p32) {
            return Err(Error::InvalidPolynomial(format!("coefficients must lie in [0, {p})")));
        }
        if poly[h as usize] != 1 {
            return Err(Error::InvalidPolynomial("polynomial must be monic".into()));
        }
        if !is_irreducible(p32, &poly) {
            return Err(Error::ReduciblePolynomial(poly));
        }
        let ext = ExtTables::build(p32, h, q, &poly)?;
        let inner = Inner { p: p32, h, q, poly, ext: Some(ext) };
        Ok(Field { inner: Shared::new(inner) })
    }

    /// GF(q) for a prime power `q`, using the built-in polynomial table.
    pub fn with_order(q: u64) -> Result<Field> {
        let (p, h) = prime_power(q).ok_or_else(|| Error::UnsupportedField(format!("{q} is not a prime power")))?;
        Field::new(p, h, None)
    }

    pub fn p(&self) -> u32 {
        self.inner.p
    }

    pub fn h(&self) -> u32 {
        self.inner.h
    }

    pub fn q(&self) -> u32 {
        self.inner.q
    }

    pub fn irreducible(&self) -> &[u32] {
        &self.inner.poly
    }

    pub fn is_even(&self) -> bool {
        self.inner.p == 2
    }

    pub fn zero(&self) -> Fe {
        Fe::ZERO
    }

    pub fn one(&self) -> Fe {
        Fe::ONE
    }

    /// The image of an integer in the prime subfield.
    pub fn from_int(&self, v: i64) -> Fe {
        Fe(v.rem_euclid(self.inner.p as i64) as u32)
    }

    pub fn element(&self, index: u32) -> Result<Fe> {
        if index < self.inner.q {
            Ok(Fe(index))
        } else {
            Err(Error::InvalidElement(format!("{index} is not below q = {}", self.inner.q)))
        }
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<Fe> {
        if coeffs.len() != self.inner.h as usize {
            return Err(Error::InvalidElement(format!("expected {} coordinates, got {}", self.inner.h, coeffs.len())));
        }
        if coeffs.iter().any(|&c| c >= self.inner.p) {
            return Err(Error::InvalidElement(format!("coordinates must lie in [0, {})", self.inner.p)));
        }
        Ok(Fe(from_digits(self.inner.p, coeffs)))
    }

    pub fn coeffs(&self, a: Fe) -> Vec<u32> {
        to_digits(self.inner.p, self.inner.h, a.0)
    }

    /// All q elements in canonical order: 0, 1, ..., p-1, then by
    /// little-endian coordinate counting.
    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        (0..self.inner.q).map(Fe)
    }

    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        let inner = &*self.inner;
        match &inner.ext {
            None => {
                let s = a.0 as u64 + b.0 as u64;
                Fe((s % inner.p as u64) as u32)
            }
            Some(_) if inner.p == 2 => Fe(a.0 ^ b.0),
            Some(ExtTables { add: Some(table), .. }) => Fe(table[(a.0 * inner.q + b.0) as usize]),
            Some(_) => {
                let (p, h) = (inner.p, inner.h);
                let s: Vec<u32> =
                    to_digits(p, h, a.0).iter().zip(to_digits(p, h, b.0)).map(|(x, y)| (x + y) % p).collect();
                Fe(from_digits(p, &s))
            }
        }
    }

    pub fn neg(&self, a: Fe) -> Fe {
        match &self.inner.ext {
            None => Fe((self.inner.p - a.0) % self.inner.p),
            Some(ext) => Fe(ext.neg[a.0 as usize]),
        }
    }

    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        match &self.inner.ext {
            None => Fe((a.0 as u64 * b.0 as u64 % self.inner.p as u64) as u32),
            Some(ext) => {
                if a.0 == 0 || b.0 == 0 {
                    Fe::ZERO
                } else {
                    Fe(ext.exp[(ext.log[a.0 as usize] + ext.log[b.0 as usize]) as usize])
                }
            }
        }
    }

    pub fn pow(&self, a: Fe, e: u64) -> Fe {
        if e == 0 {
            return Fe::ONE;
        }
        if a.is_zero() {
            return Fe::ZERO;
        }
        match &self.inner.ext {
            None => {
                let (mut base, mut e, mut acc) = (a, e, Fe::ONE);
                while e > 0 {
                    if e & 1 == 1 {
                        acc = self.mul(acc, base);
                    }
                    base = self.mul(base, base);
                    e >>= 1;
                }
                acc
            }
            Some(ext) => {
                let order = (self.inner.q - 1) as u64;
                let l = ext.log[a.0 as usize] as u64 * (e % order) % order;
                Fe(ext.exp[l as usize])
            }
        }
    }

    pub fn inv(&self, a: Fe) -> Result<Fe> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match &self.inner.ext {
            None => self.pow(a, self.inner.p as u64 - 2),
            Some(ext) => {
                let order = self.inner.q - 1;
                Fe(ext.exp[((order - ext.log[a.0 as usize]) % order) as usize])
            }
        })
    }

    pub fn div(&self, a: Fe, b: Fe) -> Result<Fe> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `-1` if `odd`, else `1`.
    pub fn sign(&self, odd: bool) -> Fe {
        if odd {
            self.neg(Fe::ONE)
        } else {
            Fe::ONE
        }
    }

    pub fn dot(&self, a: &[Fe], b: &[Fe]) -> Fe {
        a.iter().zip(b).fold(Fe::ZERO, |acc, (&x, &y)| self.add(acc, self.mul(x, y)))
    }

    pub fn product(&self, values: impl IntoIterator<Item = Fe>) -> Fe {
        values.into_iter().fold(Fe::ONE, |acc, v| self.mul(acc, v))
    }

    pub fn scale(&self, c: Fe, v: &[Fe]) -> Vec<Fe> {
        v.iter().map(|&x| self.mul(c, x)).collect()
    }

    /// JSON form: a bare integer for prime fields, little-endian coordinates otherwise.
    pub fn element_to_json(&self, a: Fe) -> Value {
        if self.inner.h == 1 {
            Value::from(a.0)
        } else {
            Value::from(self.coeffs(a))
        }
    }

    pub fn element_from_json(&self, v: &Value) -> Result<Fe> {
        let bad = || Error::InvalidElement(format!("cannot read {v} as an element of GF({})", self.inner.q));
        if self.inner.h == 1 {
            let n = v.as_u64().ok_or_else(bad)?;
            if n >= self.inner.p as u64 {
                return Err(bad());
            }
            Ok(Fe(n as u32))
        } else {
            let arr = v.as_array().ok_or_else(bad)?;
            let coeffs = arr
                .iter()
                .map(|c| c.as_u64().filter(|&c| c <= u32::MAX as u64).map(|c| c as u32))
                .collect::<Option<Vec<u32>>>()
                .ok_or_else(bad)?;
            self.from_coeffs(&coeffs)
        }
    }

    pub fn vector_to_json(&self, v: &[Fe]) -> Value {
        Value::Array(v.iter().map(|&a| self.element_to_json(a)).collect())
    }

    pub fn vector_from_json(&self, v: &Value) -> Result<Vec<Fe>> {
        v.as_array()
            .ok_or_else(|| Error::Malformed(format!("expected an array of field elements, got {v}")))?
            .iter()
            .map(|x| self.element_from_json(x))
            .collect()
    }
}

#[derive(Serialize, Deserialize)]
struct FieldSpecJson {
    p: u64,
    h: u32,
    irreducible: Vec<u32>,
}

impl Serialize for Field {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FieldSpecJson { p: self.p() as u64, h: self.h(), irreducible: self.irreducible().to_vec() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Field {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let spec = FieldSpecJson::deserialize(d)?;
        Field::new(spec.p, spec.h, Some(&spec.irreducible)).map_err(serde::de::Error::custom)
    }
}

/// Every built-in (p, h, polynomial) triple, for documentation and tests.
pub fn builtin_polynomials() -> impl Iterator<Item = (u32, u32, &'static [u32])> {
    conway::entries()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fe(f: &Field, coeffs: &[u32]) -> Fe {
        f.from_coeffs(coeffs).unwrap()
    }

    #[test]
    fn constructs_small_fields() {
        assert_eq!(Field::new(5, 1, None).unwrap().q(), 5);
        let f4 = Field::new(2, 2, Some(&[1, 1, 1])).unwrap();
        assert_eq!(f4.q(), 4);
        assert!(matches!(Field::new(2, 2, Some(&[1, 0, 1])), Err(Error::ReduciblePolynomial(_))));
        assert!(matches!(Field::new(4, 1, None), Err(Error::NotPrime(4))));
        assert!(matches!(Field::new(1, 1, None), Err(Error::NotPrime(1))));
        assert!(matches!(Field::new(2, 9, None), Err(Error::UnsupportedField(_))));
        assert!(matches!(Field::new(3, 2, Some(&[2, 2, 2])), Err(Error::InvalidPolynomial(_))));
        assert!(matches!(Field::new(5, 1, Some(&[1, 1])), Err(Error::InvalidPolynomial(_))));
    }

    #[test]
    fn explicit_polynomial_beyond_table() {
        // x^9 + x^4 + 1 is irreducible over GF(2).
        let f = Field::new(2, 9, Some(&[1, 0, 0, 0, 1, 0, 0, 0, 0, 1])).unwrap();
        assert_eq!(f.q(), 512);
        let a = f.element(300).unwrap();
        assert_eq!(f.mul(a, f.inv(a).unwrap()), Fe::ONE);
    }

    #[test]
    fn arithmetic_examples() {
        let f5 = Field::new(5, 1, None).unwrap();
        assert_eq!(f5.mul(Fe(2), Fe(4)), Fe(3));
        let f7 = Field::new(7, 1, None).unwrap();
        assert_eq!(f7.inv(Fe(3)).unwrap(), Fe(5));
        assert!(matches!(f7.inv(Fe::ZERO), Err(Error::DivisionByZero)));
        let f4 = Field::new(2, 2, Some(&[1, 1, 1])).unwrap();
        let x = fe(&f4, &[0, 1]);
        let x1 = fe(&f4, &[1, 1]);
        assert_eq!(f4.mul(x, x1), Fe::ONE);
        assert_eq!(f4.mul(x, x), x1);
    }

    #[test]
    fn prime_power_split() {
        assert_eq!(prime_power(256), Some((2, 8)));
        assert_eq!(prime_power(243), Some((3, 5)));
        assert_eq!(prime_power(7), Some((7, 1)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
    }

    #[test]
    fn builtin_table_is_irreducible_and_primitive() {
        for (p, h, poly) in builtin_polynomials() {
            assert!(is_irreducible(p, poly), "{p}^{h}");
            let q = p.pow(h);
            // x (index p) generates the multiplicative group
            assert!(ExtTables::power_table(p, h, q, poly, p).is_some(), "{p}^{h} not primitive");
        }
    }

    #[test]
    fn table_covers_every_prime_power_up_to_256() {
        for q in 2..=256u64 {
            if let Some((_, h)) = prime_power(q) {
                let f = Field::with_order(q).unwrap();
                assert_eq!(f.q() as u64, q);
                assert_eq!(f.h(), h);
            }
        }
    }

    /// Exhaustive field axioms for every q <= 256.
    #[test]
    fn exhaustive_axioms() {
        for q in 2..=256u64 {
            if prime_power(q).is_none() {
                continue;
            }
            let f = Field::with_order(q).unwrap();
            for a in f.elements() {
                assert_eq!(f.add(a, f.neg(a)), Fe::ZERO);
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), Fe::ONE, "q={q} a={a}");
                    assert_eq!(f.pow(a, q - 1), Fe::ONE);
                }
            }
        }
    }

    #[test]
    fn extension_multiplication_matches_polynomial_product() {
        for q in [8u64, 9, 25, 27, 49] {
            let f = Field::with_order(q).unwrap();
            let (p, h) = (f.p(), f.h());
            for a in f.elements() {
                for b in f.elements() {
                    let direct = poly_mulmod(p, &f.coeffs(a), &f.coeffs(b), f.irreducible());
                    let mut direct = direct;
                    direct.resize(h as usize, 0);
                    assert_eq!(f.coeffs(f.mul(a, b)), direct);
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                }
            }
        }
    }

    #[test]
    fn json_shapes() {
        let f5 = Field::new(5, 1, None).unwrap();
        assert_eq!(serde_json::to_string(&f5).unwrap(), r#"{"p":5,"h":1,"irreducible":[0,1]}"#);
        assert_eq!(f5.element_to_json(Fe(3)), serde_json::json!(3));
        let f9 = Field::with_order(9).unwrap();
        assert_eq!(f9.element_to_json(f9.element(7).unwrap()), serde_json::json!([1, 2]));
        let back: Field = serde_json::from_str(&serde_json::to_string(&f9).unwrap()).unwrap();
        assert_eq!(back, f9);
        assert!(f9.element_from_json(&serde_json::json!([3, 0])).is_err());
        assert!(f5.element_from_json(&serde_json::json!(5)).is_err());
    }

    proptest::proptest! {
        #[test]
        fn ring_laws(
            q in proptest::sample::select(vec![4u64, 8, 9, 16, 25, 27, 49, 64, 81, 121, 125, 128, 243, 256]),
            a in 0u32..256, b in 0u32..256, c in 0u32..256,
        ) {
            let f = Field::with_order(q).unwrap();
            let [a, b, c] = [a, b, c].map(|v| f.element(v % q as u32).unwrap());
            proptest::prop_assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
            proptest::prop_assert_eq!(f.add(a, f.add(b, c)), f.add(f.add(a, b), c));
            proptest::prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            proptest::prop_assert_eq!(f.sub(f.add(a, b), b), a);
            if !b.is_zero() {
                proptest::prop_assert_eq!(f.mul(f.div(a, b).unwrap(), b), a);
            }
            // Frobenius is additive.
            let p = f.p() as u64;
            proptest::prop_assert_eq!(f.pow(f.add(a, b), p), f.add(f.pow(a, p), f.pow(b, p)));
        }
    }
}

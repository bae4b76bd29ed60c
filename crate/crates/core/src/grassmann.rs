//! Grassmann algebras `∧(t1, ..., tN)` over an exact field, with monomials stored as bitsets.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::parity::Parity;
use crate::scalar::{is_negative, Field, Scalar};

/// Largest supported number of generators (one bit per generator in a `u64`).
pub const MAX_GENERATORS: u32 = 64;

/// The algebra `∧(t1, ..., tN)`. Cheap to copy; elements carry it along.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GrassmannAlgebra {
    generators: u32,
    field: Field,
}

impl GrassmannAlgebra {
    pub fn new(generators: u32, field: Field) -> Result<Self> {
        if generators > MAX_GENERATORS {
            return Err(Error::Precondition(format!(
                "at most {MAX_GENERATORS} Grassmann generators are supported, got {generators}"
            )));
        }
        Ok(GrassmannAlgebra { generators, field })
    }

    pub fn generators(&self) -> u32 {
        self.generators
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn zero(&self) -> GrassmannElement {
        GrassmannElement { alg: *self, terms: BTreeMap::new() }
    }

    pub fn one(&self) -> GrassmannElement {
        self.constant(self.field.one())
    }

    pub fn constant(&self, c: Scalar) -> GrassmannElement {
        self.monomial(0, c)
    }

    pub fn from_i64(&self, n: i64) -> GrassmannElement {
        self.constant(self.field.from_i64(n))
    }

    /// The generator `t_{i+1}` (zero-based index `i`).
    pub fn generator(&self, i: u32) -> GrassmannElement {
        assert!(i < self.generators, "generator index {i} out of range");
        self.monomial(1u64 << i, self.field.one())
    }

    /// `c * t_S` for the subset `S` encoded as a bitmask.
    pub fn monomial(&self, mask: u64, c: Scalar) -> GrassmannElement {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(mask, c);
        }
        GrassmannElement { alg: *self, terms }
    }

    fn full_mask(&self) -> u64 {
        if self.generators == 64 {
            u64::MAX
        } else {
            (1u64 << self.generators) - 1
        }
    }

    /// Every subset of generators, in increasing bitmask order.
    pub fn all_monomials(&self) -> impl Iterator<Item = u64> {
        assert!(self.generators < 32, "enumeration only for small algebras");
        0..(1u64 << self.generators)
    }

    /// Parses the text form, e.g. `3/2*t1t3 + t2 - 5`. Generators may appear in any order.
    pub fn parse(&self, text: &str) -> Result<GrassmannElement> {
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(Error::Parse("empty Grassmann element".into()));
        }
        let mut total = self.zero();
        let mut start = 0;
        let bytes = t.as_bytes();
        let mut pieces = Vec::new();
        for (i, &b) in bytes.iter().enumerate() {
            if (b == b'+' || b == b'-') && i > start {
                pieces.push(&t[start..i]);
                start = i;
            }
        }
        pieces.push(&t[start..]);
        for piece in pieces {
            let (neg, body) = match piece.as_bytes()[0] {
                b'+' => (false, &piece[1..]),
                b'-' => (true, &piece[1..]),
                _ => (false, piece),
            };
            if body.is_empty() {
                return Err(Error::Parse(format!("dangling sign in '{text}'")));
            }
            let mut term = self.one();
            for factor in body.split('*') {
                term = term.mul(&self.parse_factor(factor, text)?);
            }
            total = if neg { total.sub(&term) } else { total.add(&term) };
        }
        Ok(total)
    }

    fn parse_factor(&self, factor: &str, text: &str) -> Result<GrassmannElement> {
        let bad = || Error::Parse(format!("malformed Grassmann element '{text}'"));
        if factor.is_empty() {
            return Err(bad());
        }
        if !factor.starts_with('t') {
            return Ok(self.constant(self.field.parse(factor).map_err(|_| bad())?));
        }
        let mut out = self.one();
        for g in factor.split('t').skip(1) {
            let idx: u32 = g.parse().map_err(|_| bad())?;
            if idx == 0 || idx > self.generators {
                return Err(Error::Parse(format!(
                    "generator t{idx} outside 1..={} in '{text}'",
                    self.generators
                )));
            }
            out = out.mul(&self.generator(idx - 1));
        }
        Ok(out)
    }
}

/// Sign of `t_S * t_T` when `S` and `T` are disjoint: true when the merge has odd inversions.
pub fn merge_sign(s: u64, t: u64) -> bool {
    let mut inversions = 0u32;
    let mut rest = t;
    while rest != 0 {
        let j = rest.trailing_zeros();
        rest &= rest - 1;
        // elements of S strictly greater than j
        let above = if j == 63 { 0 } else { s & (u64::MAX << (j + 1)) };
        inversions += above.count_ones();
    }
    inversions % 2 == 1
}

/// An element of a Grassmann algebra as a sparse map from generator subsets to coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GrassmannElement {
    alg: GrassmannAlgebra,
    terms: BTreeMap<u64, Scalar>,
}

impl GrassmannElement {
    pub fn algebra(&self) -> GrassmannAlgebra {
        self.alg
    }

    pub fn field(&self) -> Field {
        self.alg.field
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, &Scalar)> {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, mask: u64) -> Scalar {
        self.terms.get(&mask).cloned().unwrap_or_else(|| self.alg.field.zero())
    }

    pub fn scalar_part(&self) -> Scalar {
        self.coefficient(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.scalar_part().is_one()
    }

    /// Returns `Some(Scalar)` when the element is a constant.
    pub fn as_constant(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(self.alg.field.zero()),
            1 if self.terms.contains_key(&0) => Some(self.scalar_part()),
            _ => None,
        }
    }

    /// The parity if the element is homogeneous; zero counts as even.
    pub fn parity(&self) -> Option<Parity> {
        let mut it = self.terms.keys().map(|m| Parity::from_bit(m.count_ones()));
        let Some(first) = it.next() else {
            return Some(Parity::Even);
        };
        it.all(|p| p == first).then_some(first)
    }

    pub fn is_even(&self) -> bool {
        self.terms.keys().all(|m| m.count_ones() % 2 == 0)
    }

    pub fn is_odd(&self) -> bool {
        self.terms.keys().all(|m| m.count_ones() % 2 == 1)
    }

    fn filtered(&self, keep: impl Fn(u64) -> bool) -> GrassmannElement {
        GrassmannElement {
            alg: self.alg,
            terms: self.terms.iter().filter(|(m, _)| keep(**m)).map(|(m, c)| (*m, c.clone())).collect(),
        }
    }

    pub fn even_part(&self) -> GrassmannElement {
        self.filtered(|m| m.count_ones() % 2 == 0)
    }

    pub fn odd_part(&self) -> GrassmannElement {
        self.filtered(|m| m.count_ones() % 2 == 1)
    }

    /// Highest number of generators in a term, or `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.count_ones()).max()
    }

    fn check_same(&self, o: &GrassmannElement) -> Result<()> {
        if self.alg == o.alg {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch(format!(
                "Grassmann algebras with {} and {} generators over {} and {}",
                self.alg.generators, o.alg.generators, self.alg.field, o.alg.field
            )))
        }
    }

    pub fn checked_add(&self, o: &GrassmannElement) -> Result<GrassmannElement> {
        self.check_same(o)?;
        let mut out = self.clone();
        out.add_assign_ref(o);
        Ok(out)
    }

    fn add_assign_ref(&mut self, o: &GrassmannElement) {
        for (m, c) in &o.terms {
            self.add_term(*m, c);
        }
    }

    /// Adds `c * t_mask` in place.
    pub fn add_term(&mut self, mask: u64, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&mask) {
            Some(x) => {
                *x += c;
                if x.is_zero() {
                    self.terms.remove(&mask);
                }
            }
            None => {
                self.terms.insert(mask, c.clone());
            }
        }
    }

    pub fn checked_mul(&self, o: &GrassmannElement) -> Result<GrassmannElement> {
        self.check_same(o)?;
        let mut out = self.alg.zero();
        for (s, a) in &self.terms {
            for (t, b) in &o.terms {
                if s & t != 0 {
                    continue;
                }
                let c = a * b;
                let c = if merge_sign(*s, *t) { -c } else { c };
                out.add_term(s | t, &c);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> GrassmannElement {
        if c.is_zero() {
            return self.alg.zero();
        }
        GrassmannElement { alg: self.alg, terms: self.terms.iter().map(|(m, x)| (*m, x * c)).collect() }
    }

    pub fn pow(&self, e: u32) -> GrassmannElement {
        let mut acc = self.alg.one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn is_invertible(&self) -> bool {
        !self.scalar_part().is_zero()
    }

    /// Inverse of an element with nonzero constant term: `c^-1 * sum (-n/c)^k`.
    pub fn inverse(&self) -> Result<GrassmannElement> {
        let c = self.scalar_part();
        if c.is_zero() {
            return Err(Error::NotInvertible(format!("{self} has zero constant term")));
        }
        let cinv = c.inv()?;
        let mut nil = self.clone();
        nil.terms.remove(&0);
        let step = nil.scale(&-&cinv);
        let mut acc = self.alg.one();
        let mut power = self.alg.one();
        loop {
            power = power.mul(&step);
            if power.is_zero() {
                break;
            }
            acc = acc.add(&power);
        }
        Ok(acc.scale(&cinv))
    }

    /// Applies the superalgebra map `t_i -> images[i]`; every image must be odd.
    pub fn hom_apply(&self, images: &[GrassmannElement]) -> Result<GrassmannElement> {
        if images.len() != self.alg.generators as usize {
            return Err(Error::Dimension(format!(
                "{} images for {} generators",
                images.len(),
                self.alg.generators
            )));
        }
        let target = match images.first() {
            Some(x) => x.alg,
            None => self.alg,
        };
        for (i, img) in images.iter().enumerate() {
            img.check_same(&target.zero())?;
            if !img.is_odd() {
                return Err(Error::Parity(format!("image of t{} is not odd: {img}", i + 1)));
            }
        }
        let mut out = target.zero();
        for (m, c) in &self.terms {
            let mut term = target.constant(c.clone());
            let mut rest = *m;
            while rest != 0 {
                let i = rest.trailing_zeros();
                rest &= rest - 1;
                term = term.mul(&images[i as usize]);
            }
            out.add_assign_ref(&term);
        }
        Ok(out)
    }

    /// Views the element inside a Grassmann algebra with at least as many generators.
    pub fn embed(&self, target: GrassmannAlgebra) -> Result<GrassmannElement> {
        if target.field != self.alg.field || target.generators < self.alg.generators {
            return Err(Error::AlgebraMismatch("cannot embed into a smaller algebra".into()));
        }
        Ok(GrassmannElement { alg: target, terms: self.terms.clone() })
    }

    /// Drops every term that involves a generator outside `mask`.
    pub fn restrict(&self, mask: u64) -> GrassmannElement {
        self.filtered(|m| m & !mask == 0)
    }

    /// Splits off the part divisible by the monomial `t_block` (generators in `block`), returning
    /// `(x0, x1)` with `self = x0 + t_block * x1` and neither involving those generators.
    pub fn split_by(&self, block: u64) -> (GrassmannElement, GrassmannElement) {
        let mut rest = self.alg.zero();
        let mut quot = self.alg.zero();
        for (m, c) in &self.terms {
            if m & block == 0 {
                rest.add_term(*m, c);
            } else if m & block == block {
                let r = m & !block;
                let c = if merge_sign(block, r) { -c } else { c.clone() };
                quot.add_term(r, &c);
            }
            // terms meeting the block only partially are dropped by callers' construction
        }
        (rest, quot)
    }

    pub fn full_mask(&self) -> u64 {
        self.alg.full_mask()
    }

    /// Views the element inside a smaller algebra; fails if it involves a dropped generator.
    pub fn project(&self, target: GrassmannAlgebra) -> Result<GrassmannElement> {
        if target.field != self.alg.field {
            return Err(Error::AlgebraMismatch("projection between different fields".into()));
        }
        let keep = target.full_mask();
        if self.terms.keys().any(|m| m & !keep != 0) {
            return Err(Error::AlgebraMismatch(format!("element {self} involves generators outside the target")));
        }
        Ok(GrassmannElement { alg: target, terms: self.terms.clone() })
    }
}

fn monomial_text(mask: u64) -> String {
    let mut s = String::new();
    let mut rest = mask;
    while rest != 0 {
        let i = rest.trailing_zeros();
        rest &= rest - 1;
        s.push_str(&format!("t{}", i + 1));
    }
    s
}

fn coeff_text(c: &Scalar) -> String {
    match c {
        Scalar::Modular { value, .. } => value.to_string(),
        Scalar::Rational(_) => c.to_string(),
    }
}

impl fmt::Display for GrassmannElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // order by degree, then by generator bitmask
        let mut keys: Vec<&u64> = self.terms.keys().collect();
        keys.sort_by_key(|m| (m.count_ones(), m.reverse_bits()));
        for (i, m) in keys.into_iter().enumerate() {
            let c = &self.terms[m];
            let (neg, mag) = if is_negative(c) { (true, -c) } else { (false, c.clone()) };
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            if *m == 0 {
                write!(f, "{}", coeff_text(&mag))?;
            } else if mag.is_one() {
                write!(f, "{}", monomial_text(*m))?;
            } else {
                write!(f, "{}*{}", coeff_text(&mag), monomial_text(*m))?;
            }
        }
        Ok(())
    }
}

macro_rules! grassmann_op {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl $tr<&GrassmannElement> for &GrassmannElement {
            type Output = GrassmannElement;
            fn $m(self, o: &GrassmannElement) -> GrassmannElement {
                self.$checked(o).expect("Grassmann elements from different algebras")
            }
        }
    };
}

impl GrassmannElement {
    pub fn checked_sub(&self, o: &GrassmannElement) -> Result<GrassmannElement> {
        self.checked_add(&o.neg())
    }

    /// Panicking addition for elements known to share an algebra.
    pub fn add(&self, o: &GrassmannElement) -> GrassmannElement {
        self.checked_add(o).expect("Grassmann elements from different algebras")
    }

    pub fn sub(&self, o: &GrassmannElement) -> GrassmannElement {
        self.checked_sub(o).expect("Grassmann elements from different algebras")
    }

    pub fn mul(&self, o: &GrassmannElement) -> GrassmannElement {
        self.checked_mul(o).expect("Grassmann elements from different algebras")
    }

    pub fn neg(&self) -> GrassmannElement {
        GrassmannElement { alg: self.alg, terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect() }
    }
}

grassmann_op!(Add, add, checked_add);
grassmann_op!(Sub, sub, checked_sub);
grassmann_op!(Mul, mul, checked_mul);

impl Neg for &GrassmannElement {
    type Output = GrassmannElement;
    fn neg(self) -> GrassmannElement {
        GrassmannElement::neg(self)
    }
}

impl Neg for GrassmannElement {
    type Output = GrassmannElement;
    fn neg(self) -> GrassmannElement {
        GrassmannElement::neg(&self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alg(n: u32) -> GrassmannAlgebra {
        GrassmannAlgebra::new(n, Field::Rationals).unwrap()
    }

    #[test]
    fn generators_anticommute_and_square_to_zero() {
        let a = alg(3);
        let (t1, t2) = (a.generator(0), a.generator(1));
        assert_eq!(&t1 * &t2, -(&t2 * &t1));
        assert!((&t1 * &t1).is_zero());
    }

    #[test]
    fn documented_products() {
        let a = alg(3);
        let (t1, t2, t3) = (a.generator(0), a.generator(1), a.generator(2));
        let x = &t1 + &t2;
        let y = &t1 - &t2;
        assert_eq!(&x * &y, (&t1 * &t2).scale(&Field::Rationals.from_i64(-2)));
        let t13 = &t1 * &t3;
        assert_eq!(&t13 * &t2, -(&(&t1 * &t2) * &t3));
    }

    #[test]
    fn parse_normalizes_generator_order() {
        let a = alg(3);
        assert_eq!(a.parse("t3t1").unwrap(), -(&a.generator(0) * &a.generator(2)));
        let x = a.parse("3/2*t1t3 + t2 - 5").unwrap();
        assert_eq!(x.to_string(), "-5 + t2 + 3/2*t1t3");
        assert_eq!(a.parse(&x.to_string()).unwrap(), x);
        assert!(a.parse("t4").is_err());
        assert!(a.parse("t1+").is_err());
    }

    #[test]
    fn mixed_algebras_are_rejected() {
        let x = alg(2).generator(0);
        let y = alg(3).generator(0);
        assert!(matches!(x.checked_mul(&y), Err(Error::AlgebraMismatch(_))));
    }

    #[test]
    fn homomorphisms() {
        let a = alg(2);
        let b = alg(3);
        let images = vec![&b.generator(0) + &b.generator(1), b.generator(2)];
        let x = a.parse("t1t2").unwrap();
        assert_eq!(x.hom_apply(&images).unwrap(), b.parse("t1t3 + t2t3").unwrap());
        let bad = vec![b.parse("t1t2").unwrap(), b.generator(2)];
        assert!(matches!(x.hom_apply(&bad), Err(Error::Parity(_))));
    }

    #[test]
    fn inverse_of_unit() {
        let a = alg(4);
        let x = a.parse("2 + t1t2 + t3t4").unwrap();
        assert!((&x * &x.inverse().unwrap()).is_one());
        assert!(a.parse("t1t2").unwrap().inverse().is_err());
    }

    #[test]
    fn split_off_block() {
        let a = alg(4);
        let x = a.parse("1 + 3*t1t3t4 + t2").unwrap();
        let (x0, x1) = x.split_by(0b1100);
        assert_eq!(x0, a.parse("1 + t2").unwrap());
        assert_eq!(&a.parse("t3t4").unwrap() * &x1, a.parse("3*t1t3t4").unwrap());
    }
}

//! Sparse Laurent polynomials with exact coefficients.
//!
//! Coordinate functions on a matrix group use nonnegative exponents in the variables
//! `g11 .. gmm, d`; parametrizations of subgroups may also use negative exponents.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grassmann::{GrassmannAlgebra, GrassmannElement};
use crate::scalar::{is_negative, Field, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    field: Field,
    nvars: usize,
    terms: BTreeMap<Vec<i32>, Scalar>,
}

/// One term of the JSON form: a coefficient and a map from variable name to exponent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermSpec(pub ScalarSpec, #[serde(default)] pub BTreeMap<String, i32>);

/// A coefficient written either as a JSON integer or as a string such as `"3/2"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarSpec {
    Int(i64),
    Text(String),
}

impl ScalarSpec {
    pub fn to_scalar(&self, field: Field) -> Result<Scalar> {
        match self {
            ScalarSpec::Int(n) => Ok(field.from_i64(*n)),
            ScalarSpec::Text(t) => field.parse(t),
        }
    }

    pub fn from_scalar(s: &Scalar) -> ScalarSpec {
        match s {
            Scalar::Modular { value, .. } => ScalarSpec::Int(*value as i64),
            Scalar::Rational(_) => ScalarSpec::Text(s.to_string()),
        }
    }
}

/// JSON form of a polynomial: a list of terms.
pub type PolySpec = Vec<TermSpec>;

/// Variable names `g11, g12, ..., gmm, d` for coordinate functions on `m x m` matrices.
pub fn group_variable_names(m: usize) -> Vec<String> {
    let mut names: Vec<String> = (0..m * m).map(|k| format!("g{}{}", k / m + 1, k % m + 1)).collect();
    names.push("d".into());
    names
}

impl Polynomial {
    pub fn zero(field: Field, nvars: usize) -> Polynomial {
        Polynomial { field, nvars, terms: BTreeMap::new() }
    }

    pub fn constant(field: Field, nvars: usize, c: Scalar) -> Polynomial {
        let mut p = Polynomial::zero(field, nvars);
        p.add_term(vec![0; nvars], &c);
        p
    }

    pub fn one(field: Field, nvars: usize) -> Polynomial {
        Polynomial::constant(field, nvars, field.one())
    }

    pub fn var(field: Field, nvars: usize, i: usize) -> Polynomial {
        Polynomial::monomial(field, nvars, i, 1)
    }

    pub fn monomial(field: Field, nvars: usize, i: usize, exp: i32) -> Polynomial {
        let mut e = vec![0; nvars];
        e[i] = exp;
        let mut p = Polynomial::zero(field, nvars);
        p.add_term(e, &field.one());
        p
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i32>, &Scalar)> {
        self.terms.iter()
    }

    /// True when no exponent is negative.
    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x >= 0))
    }

    pub fn add_term(&mut self, exps: Vec<i32>, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&exps) {
            Some(x) => {
                *x += c;
                if x.is_zero() {
                    self.terms.remove(&exps);
                }
            }
            None => {
                self.terms.insert(exps, c.clone());
            }
        }
    }

    pub fn add(&self, o: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), c);
        }
        out
    }

    pub fn neg(&self) -> Polynomial {
        self.scale(&self.field.from_i64(-1))
    }

    pub fn sub(&self, o: &Polynomial) -> Polynomial {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &Scalar) -> Polynomial {
        let mut out = Polynomial::zero(self.field, self.nvars);
        for (e, x) in &self.terms {
            out.add_term(e.clone(), &(x * c));
        }
        out
    }

    pub fn mul(&self, o: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero(self.field, self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<i32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, &(c1 * c2));
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut acc = Polynomial::one(self.field, self.nvars);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Partial derivative with respect to variable `i`.
    pub fn derivative(&self, i: usize) -> Polynomial {
        let mut out = Polynomial::zero(self.field, self.nvars);
        for (e, c) in &self.terms {
            if e[i] != 0 {
                let mut e2 = e.clone();
                e2[i] -= 1;
                out.add_term(e2, &(c * &self.field.from_i64(e[i] as i64)));
            }
        }
        out
    }

    /// Evaluates at values in a (commutative) even part of a Grassmann algebra.
    /// Negative exponents require invertible values.
    pub fn eval(&self, alg: GrassmannAlgebra, values: &[GrassmannElement]) -> Result<GrassmannElement> {
        if values.len() != self.nvars {
            return Err(Error::Dimension(format!("{} values for {} variables", values.len(), self.nvars)));
        }
        let mut inverses: Vec<Option<GrassmannElement>> = vec![None; self.nvars];
        let mut out = alg.zero();
        for (e, c) in &self.terms {
            let mut term = alg.constant(c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    term = term.mul(&values[i].pow(k as u32));
                } else if k < 0 {
                    if inverses[i].is_none() {
                        inverses[i] = Some(values[i].inverse()?);
                    }
                    term = term.mul(&inverses[i].as_ref().unwrap().pow((-k) as u32));
                }
                if term.is_zero() {
                    break;
                }
            }
            out = out.add(&term);
        }
        Ok(out)
    }

    /// Evaluates at scalar values.
    pub fn eval_scalars(&self, values: &[Scalar]) -> Result<Scalar> {
        let alg = GrassmannAlgebra::new(0, self.field)?;
        let vals: Vec<GrassmannElement> = values.iter().map(|v| alg.constant(v.clone())).collect();
        Ok(self.eval(alg, &vals)?.scalar_part())
    }

    /// Substitutes polynomial `images[i]` for variable `i`. Requires nonnegative exponents.
    pub fn compose(&self, images: &[Polynomial]) -> Result<Polynomial> {
        if images.len() != self.nvars {
            return Err(Error::Dimension(format!("{} images for {} variables", images.len(), self.nvars)));
        }
        if !self.is_polynomial() {
            return Err(Error::Precondition("cannot compose a Laurent polynomial".into()));
        }
        let target_vars = images.first().map_or(0, |p| p.nvars);
        let mut out = Polynomial::zero(self.field, target_vars);
        for (e, c) in &self.terms {
            let mut term = Polynomial::constant(self.field, target_vars, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    term = term.mul(&images[i].pow(k as u32));
                }
            }
            out = out.add(&term);
        }
        Ok(out)
    }

    pub fn from_spec(field: Field, names: &[String], spec: &PolySpec) -> Result<Polynomial> {
        let mut out = Polynomial::zero(field, names.len());
        for TermSpec(c, vars) in spec {
            let mut e = vec![0; names.len()];
            for (name, k) in vars {
                let i = names
                    .iter()
                    .position(|n| n == name)
                    .ok_or_else(|| Error::Parse(format!("unknown variable '{name}'")))?;
                e[i] += k;
            }
            out.add_term(e, &c.to_scalar(field)?);
        }
        Ok(out)
    }

    pub fn to_spec(&self, names: &[String]) -> PolySpec {
        self.terms
            .iter()
            .map(|(e, c)| {
                let vars = e
                    .iter()
                    .enumerate()
                    .filter(|(_, k)| **k != 0)
                    .map(|(i, k)| (names[i].clone(), *k))
                    .collect();
                TermSpec(ScalarSpec::from_scalar(c), vars)
            })
            .collect()
    }

    /// Parses text such as `"g11*g22 - g12*g21 - 1"` or `"c*a*b + 3/2*a^-1"` over the named
    /// variables. Terms are products of numbers and `name` or `name^k` factors.
    pub fn parse(field: Field, names: &[String], text: &str) -> Result<Polynomial> {
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let bytes = t.as_bytes();
        let mut pieces = Vec::new();
        let mut start = 0;
        for i in 1..bytes.len() {
            if (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'^' {
                pieces.push(&t[start..i]);
                start = i;
            }
        }
        pieces.push(&t[start..]);
        let mut out = Polynomial::zero(field, names.len());
        for piece in pieces {
            let (neg, body) = match piece.as_bytes()[0] {
                b'+' => (false, &piece[1..]),
                b'-' => (true, &piece[1..]),
                _ => (false, piece),
            };
            if body.is_empty() {
                return Err(Error::Parse(format!("dangling sign in '{text}'")));
            }
            let mut coeff = field.one();
            let mut exps = vec![0i32; names.len()];
            for factor in body.split('*') {
                let (base, exp) = match factor.split_once('^') {
                    Some((b, e)) => {
                        let e = e.trim_start_matches('(').trim_end_matches(')');
                        (b, e.parse::<i32>().map_err(|_| Error::Parse(format!("bad exponent in '{text}'")))?)
                    }
                    None => (factor, 1),
                };
                if base.is_empty() {
                    return Err(Error::Parse(format!("malformed polynomial '{text}'")));
                }
                match names.iter().position(|n| n == base) {
                    Some(i) => exps[i] += exp,
                    None if base.as_bytes()[0].is_ascii_digit() => {
                        let c = field.parse(base)?;
                        let c = if exp >= 0 { c.pow(exp as i64)? } else { c.inv()?.pow(-exp as i64)? };
                        coeff = &coeff * &c;
                    }
                    None => return Err(Error::Parse(format!("unknown variable '{base}' in '{text}'"))),
                }
            }
            out.add_term(exps, &if neg { -coeff } else { coeff });
        }
        Ok(out)
    }

    /// Human readable form using the given variable names.
    pub fn display_with<'a>(&'a self, names: &'a [String]) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, names }
    }
}

pub struct PolyDisplay<'a> {
    poly: &'a Polynomial,
    names: &'a [String],
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (e, c)) in self.poly.terms.iter().rev().enumerate() {
            let neg = is_negative(c);
            let mag = if neg { -c } else { c.clone() };
            match (n, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, k)| **k != 0)
                .map(|(i, k)| if *k == 1 { self.names[i].clone() } else { format!("{}^{}", self.names[i], k) })
                .collect();
            if vars.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{mag}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn det2(f: Field) -> Polynomial {
        let v = |i| Polynomial::var(f, 5, i);
        v(0).mul(&v(3)).sub(&v(1).mul(&v(2)))
    }

    #[test]
    fn evaluation_and_derivative() {
        let f = Field::Rationals;
        let p = det2(f);
        let vals: Vec<Scalar> = [2, 1, 7, 4, 1].iter().map(|&x| f.from_i64(x)).collect();
        assert_eq!(p.eval_scalars(&vals).unwrap(), f.one());
        assert_eq!(p.derivative(0), Polynomial::var(f, 5, 3));
    }

    #[test]
    fn laurent_evaluation() {
        let f = Field::Rationals;
        let p = Polynomial::monomial(f, 1, 0, -2);
        assert_eq!(p.eval_scalars(&[f.from_i64(2)]).unwrap(), f.from_ratio(1, 4).unwrap());
        assert!(p.eval_scalars(&[f.zero()]).is_err());
    }

    #[test]
    fn spec_round_trip_and_compose() {
        let f = Field::Rationals;
        let names = group_variable_names(2);
        let p = det2(f).sub(&Polynomial::one(f, 5));
        let back = Polynomial::from_spec(f, &names, &p.to_spec(&names)).unwrap();
        assert_eq!(back, p);
        assert_eq!(p.display_with(&names).to_string(), "g11*g22 - g12*g21 - 1");
        // det(diag(s, s^-1)) - 1 = 0 as a Laurent polynomial in s
        let s = |k| Polynomial::monomial(f, 1, 0, k);
        let z = Polynomial::zero(f, 1);
        let images = vec![s(1), z.clone(), z, s(-1), Polynomial::one(f, 1)];
        // compose needs nonnegative exponents in the outer polynomial only
        assert!(p.compose(&images).unwrap().is_zero());
    }

    #[test]
    fn text_form_parses() {
        let f = Field::Rationals;
        let names = group_variable_names(2);
        assert_eq!(Polynomial::parse(f, &names, "g11*g22 - g12*g21").unwrap(), det2(f));
        let abc: Vec<String> = ["a", "b"].iter().map(|s| s.to_string()).collect();
        let p = Polynomial::parse(f, &abc, "3/2*a^-1 + a*b^2 - 2").unwrap();
        let vals = [f.from_i64(2), f.from_i64(3)];
        assert_eq!(p.eval_scalars(&vals).unwrap(), &f.from_ratio(3, 4).unwrap() + &f.from_i64(16));
        assert!(matches!(Polynomial::parse(f, &abc, "a + z"), Err(Error::Parse(_))));
        assert!(Polynomial::parse(f, &abc, "a +").is_err());
        assert!(Polynomial::parse(f, &abc, "").is_err());
    }
}

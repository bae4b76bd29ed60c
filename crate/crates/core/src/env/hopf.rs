//! Coproduct, counit and antipode of `U(g)_A`, and the tensor square `U(g)_A ⊗_A U(g)_A`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::{same_env, Enveloping, PbwMonomial, UEnvElement};
use crate::error::{Error, Result};
use crate::grassmann::{merge_sign, GrassmannAlgebra, GrassmannElement};
use crate::scalar::{sign, Scalar};

/// Elements `sum a ⊗ (M ⊗ N)` of `U(g)_A ⊗_A U(g)_A`, coefficients collected on the left.
#[derive(Clone)]
pub struct TensorUEnv {
    env: Arc<Enveloping>,
    alg: GrassmannAlgebra,
    terms: BTreeMap<(PbwMonomial, PbwMonomial), GrassmannElement>,
}

impl PartialEq for TensorUEnv {
    fn eq(&self, o: &TensorUEnv) -> bool {
        self.alg == o.alg && same_env(&self.env, &o.env) && self.terms == o.terms
    }
}

impl Eq for TensorUEnv {}

impl fmt::Debug for TensorUEnv {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = self.env.lie();
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((a, b), c)| format!("({c})⊗[{} ⊗ {}]", a.format(g), b.format(g)))
            .collect();
        write!(f, "TensorUEnv({})", parts.join(" + "))
    }
}

impl TensorUEnv {
    pub fn zero(env: &Arc<Enveloping>, alg: GrassmannAlgebra) -> TensorUEnv {
        TensorUEnv { env: env.clone(), alg, terms: BTreeMap::new() }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(PbwMonomial, PbwMonomial), &GrassmannElement)> {
        self.terms.iter()
    }

    fn add_term(&mut self, key: (PbwMonomial, PbwMonomial), a: &GrassmannElement) {
        if a.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(x) => {
                *x = x.add(a);
                if x.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, a.clone());
            }
        }
    }

    pub fn add(&self, o: &TensorUEnv) -> TensorUEnv {
        let mut out = self.clone();
        for (k, a) in &o.terms {
            out.add_term(k.clone(), a);
        }
        out
    }

    pub fn neg(&self) -> TensorUEnv {
        let mut out = self.clone();
        for a in out.terms.values_mut() {
            *a = a.neg();
        }
        out
    }

    /// `u ⊗_A w` with `(a ⊗ M) ⊗ (b ⊗ N) = (-1)^{|b||M|} ab ⊗ (M ⊗ N)`.
    pub fn tensor(u: &UEnvElement, w: &UEnvElement) -> Result<TensorUEnv> {
        if u.alg != w.alg || !same_env(&u.env, &w.env) {
            return Err(Error::AlgebraMismatch("tensor factors from different contexts".into()));
        }
        let mut out = TensorUEnv::zero(&u.env, u.alg);
        for (m, a) in &u.terms {
            for (n, b) in &w.terms {
                let b = if m.parity().is_odd() { b.even_part().sub(&b.odd_part()) } else { b.clone() };
                out.add_term((m.clone(), n.clone()), &a.mul(&b));
            }
        }
        Ok(out)
    }

    /// Product with `(a ⊗ b)(c ⊗ d) = (-1)^{|b||c|} ac ⊗ bd`, including Grassmann coefficients.
    pub fn mul(&self, o: &TensorUEnv) -> TensorUEnv {
        let mut out = TensorUEnv::zero(&self.env, self.alg);
        let f = self.env.lie().field();
        for ((m1, m2), a) in &self.terms {
            let left_odd = (m1.parity() + m2.parity()).is_odd();
            for ((n1, n2), b) in &o.terms {
                let b = if left_odd { b.even_part().sub(&b.odd_part()) } else { b.clone() };
                let coeff = a.mul(&b);
                if coeff.is_zero() {
                    continue;
                }
                let s = sign(f, m2.parity().koszul(n1.parity()));
                let p1 = self.env.mul_monomials(m1, n1);
                let p2 = self.env.mul_monomials(m2, n2);
                for (q1, c1) in p1.iter() {
                    for (q2, c2) in p2.iter() {
                        out.add_term((q1.clone(), q2.clone()), &coeff.scale(&(&s * &(c1 * c2))));
                    }
                }
            }
        }
        out
    }

    /// Applies `m ∘ (S ⊗ id)`: `a ⊗ (M ⊗ N) -> a ⊗ S(M) N`.
    pub fn multiply_antipode_left(&self) -> UEnvElement {
        let mut out = UEnvElement::zero(&self.env, self.alg);
        for ((m, n), a) in &self.terms {
            let s = antipode_monomial(&self.env, m);
            for (p, c) in s {
                for (q, c2) in self.env.mul_monomials(&p, n).iter() {
                    out.add_term(q.clone(), &a.scale(&(&c * c2)));
                }
            }
        }
        out
    }

    /// Applies `m ∘ (id ⊗ S)`.
    pub fn multiply_antipode_right(&self) -> UEnvElement {
        let mut out = UEnvElement::zero(&self.env, self.alg);
        for ((m, n), a) in &self.terms {
            let s = antipode_monomial(&self.env, n);
            for (p, c) in s {
                for (q, c2) in self.env.mul_monomials(m, &p).iter() {
                    out.add_term(q.clone(), &a.scale(&(&c * c2)));
                }
            }
        }
        out
    }

    /// Applies the coproduct to the left or right tensor factor, giving triple tensors.
    pub fn coproduct_on(&self, left: bool) -> BTreeMap<[PbwMonomial; 3], GrassmannElement> {
        let mut out: BTreeMap<[PbwMonomial; 3], GrassmannElement> = BTreeMap::new();
        let f = self.env.lie().field();
        for ((m, n), a) in &self.terms {
            let target = if left { m } else { n };
            for (p, q, c) in coproduct_monomial(target, f) {
                let key = if left { [p, q, n.clone()] } else { [m.clone(), p, q] };
                let e = out.entry(key).or_insert_with(|| self.alg.zero());
                *e = e.add(&a.scale(&c));
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    }
}

/// `Δ(x^α v_S) = sum C(α, β) (±) x^β v_T ⊗ x^{α-β} v_{S∖T}`.
pub(crate) fn coproduct_monomial(mono: &PbwMonomial, f: crate::scalar::Field) -> Vec<(PbwMonomial, PbwMonomial, Scalar)> {
    let mut even_splits: Vec<(Vec<u32>, Vec<u32>, Scalar)> = vec![(Vec::new(), Vec::new(), f.one())];
    for &e in &mono.even {
        let mut next = Vec::new();
        for (l, r, c) in &even_splits {
            for b in 0..=e {
                let mut l2 = l.clone();
                let mut r2 = r.clone();
                l2.push(b);
                r2.push(e - b);
                next.push((l2, r2, c * &f.from_i64(binomial(e, b))));
            }
        }
        even_splits = next;
    }
    let s = mono.odd;
    let mut out = Vec::new();
    // iterate over all subsets T of S
    let mut t = s;
    loop {
        let rest = s & !t;
        // pairs (p in rest, q in T) with p < q contribute a sign
        let neg = merge_sign(t, rest);
        for (l, r, c) in &even_splits {
            let coeff = if neg { -c } else { c.clone() };
            out.push((PbwMonomial::new(l.clone(), t), PbwMonomial::new(r.clone(), rest), coeff));
        }
        if t == 0 {
            break;
        }
        t = (t - 1) & s;
    }
    out
}

fn binomial(n: u32, k: u32) -> i64 {
    let mut acc: i64 = 1;
    for i in 0..k as i64 {
        acc = acc * (n as i64 - i) / (i + 1);
    }
    acc
}

/// `S(z_1 ... z_k) = (-1)^k (-1)^{C(r,2)} z_k ... z_1` with `r` odd letters, straightened.
pub(crate) fn antipode_monomial(env: &Arc<Enveloping>, mono: &PbwMonomial) -> Vec<(PbwMonomial, Scalar)> {
    let f = env.lie().field();
    let letters = mono.letters();
    let r = mono.odd.count_ones() as usize;
    let neg = (letters.len() + r * r.saturating_sub(1) / 2) % 2 == 1;
    let mut cur = vec![(PbwMonomial::one(env.lie().even_dim()), sign(f, neg))];
    for &l in letters.iter().rev() {
        let mut next = super::LinComb::new();
        for (m, c) in &cur {
            for (m2, c2) in env.mul_letter(m, l).iter() {
                super::lin_add(&mut next, m2, &(c * c2));
            }
        }
        cur = next.into_iter().collect();
    }
    cur
}

impl UEnvElement {
    /// The coproduct, an algebra map with `Δz = z ⊗ 1 + 1 ⊗ z` on `g`.
    pub fn coproduct(&self) -> TensorUEnv {
        let f = self.env.lie().field();
        let mut out = TensorUEnv::zero(&self.env, self.alg);
        for (m, a) in &self.terms {
            for (l, r, c) in coproduct_monomial(m, f) {
                out.add_term((l, r), &a.scale(&c));
            }
        }
        out
    }

    /// The antipode, `A`-linear and super-anti-multiplicative with `S(z) = -z` on `g`.
    pub fn antipode(&self) -> UEnvElement {
        let mut out = UEnvElement::zero(&self.env, self.alg);
        for (m, a) in &self.terms {
            for (p, c) in antipode_monomial(&self.env, m) {
                out.add_term(p, &a.scale(&c));
            }
        }
        out
    }

    /// Grouplike test: even, counit one, and `Δu = u ⊗_A u`.
    pub fn is_grouplike(&self) -> bool {
        if self.parity() != Some(crate::parity::Parity::Even) {
            return false;
        }
        if !self.counit().is_one() {
            return false;
        }
        match TensorUEnv::tensor(self, self) {
            Ok(t) => self.coproduct() == t,
            Err(_) => false,
        }
    }

    /// Primitive test: `Δu = u ⊗ 1 + 1 ⊗ u`.
    pub fn is_primitive(&self) -> bool {
        let one = UEnvElement::one(&self.env, self.alg);
        let a = TensorUEnv::tensor(self, &one).expect("same context");
        let b = TensorUEnv::tensor(&one, self).expect("same context");
        self.coproduct() == a.add(&b)
    }
}

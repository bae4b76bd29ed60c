//! The enveloping superalgebra `U(g)` base-extended to a Grassmann algebra, in PBW normal form.
//!
//! A normal monomial is `x_1^{a_1} ... x_m^{a_m} v_{i_1} ... v_{i_r}` with `i_1 < ... < i_r`.
//! Products of normal monomials are straightened over the ground field by the rules
//! `zw = (-1)^{|z||w|} wz + [z, w]` and `v v = v^<2>`, and Grassmann coefficients are moved in
//! front with the Koszul sign.

mod factor;
mod hopf;
mod straighten;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use parking_lot::RwLock;

use crate::error::{Error, Result};
use crate::grassmann::{GrassmannAlgebra, GrassmannElement};
use crate::liesuper::{LieSuperAlgebra, LieSuperElementA};
use crate::parity::Parity;
use crate::scalar::Scalar;

pub use factor::{e_factor, e_factor_basis, f_factor, f_factor_basis, verify_relation, AutomorphismData, Relation};
pub use hopf::TensorUEnv;
pub use straighten::{pbw_normalize, RewriteOrder};

/// A PBW monomial: exponents of the even basis and a strictly increasing set of odd indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PbwMonomial {
    even: Vec<u32>,
    odd: u64,
}

impl PbwMonomial {
    pub fn one(even_dim: usize) -> PbwMonomial {
        PbwMonomial { even: vec![0; even_dim], odd: 0 }
    }

    pub fn new(even: Vec<u32>, odd: u64) -> PbwMonomial {
        PbwMonomial { even, odd }
    }

    /// The monomial consisting of the single letter with global index `letter`.
    pub fn letter(even_dim: usize, letter: usize) -> PbwMonomial {
        let mut m = PbwMonomial::one(even_dim);
        if letter < even_dim {
            m.even[letter] = 1;
        } else {
            m.odd = 1u64 << (letter - even_dim);
        }
        m
    }

    pub fn even_exponents(&self) -> &[u32] {
        &self.even
    }

    pub fn odd_mask(&self) -> u64 {
        self.odd
    }

    pub fn is_one(&self) -> bool {
        self.odd == 0 && self.even.iter().all(|&e| e == 0)
    }

    pub fn degree(&self) -> u32 {
        self.even.iter().sum::<u32>() + self.odd.count_ones()
    }

    pub fn parity(&self) -> Parity {
        Parity::from_bit(self.odd.count_ones())
    }

    pub fn is_even_part(&self) -> bool {
        self.odd == 0
    }

    /// The letters of the monomial in normal order (global basis indices).
    pub fn letters(&self) -> Vec<usize> {
        let m = self.even.len();
        let mut w = Vec::with_capacity(self.degree() as usize);
        for (i, &e) in self.even.iter().enumerate() {
            w.extend(std::iter::repeat_n(i, e as usize));
        }
        let mut rest = self.odd;
        while rest != 0 {
            w.push(m + rest.trailing_zeros() as usize);
            rest &= rest - 1;
        }
        w
    }

    /// Splits off the last letter: `self = rest * last`.
    pub(crate) fn split_last(&self) -> Option<(PbwMonomial, usize)> {
        let m = self.even.len();
        if self.odd != 0 {
            let top = 63 - self.odd.leading_zeros() as usize;
            let mut rest = self.clone();
            rest.odd &= !(1u64 << top);
            return Some((rest, m + top));
        }
        let i = self.even.iter().rposition(|&e| e > 0)?;
        let mut rest = self.clone();
        rest.even[i] -= 1;
        Some((rest, i))
    }

    pub fn format(&self, g: &LieSuperAlgebra) -> String {
        if self.is_one() {
            return "1".into();
        }
        let mut parts = Vec::new();
        for (i, &e) in self.even.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(g.name(i).to_string()),
                _ => parts.push(format!("{}^{e}", g.name(i))),
            }
        }
        let mut rest = self.odd;
        while rest != 0 {
            parts.push(g.name(self.even.len() + rest.trailing_zeros() as usize).to_string());
            rest &= rest - 1;
        }
        parts.join("*")
    }
}

/// Linear combination of PBW monomials over the ground field.
pub type LinComb = BTreeMap<PbwMonomial, Scalar>;

pub(crate) fn lin_add(acc: &mut LinComb, m: &PbwMonomial, c: &Scalar) {
    if c.is_zero() {
        return;
    }
    match acc.get_mut(m) {
        Some(x) => {
            *x += c;
            if x.is_zero() {
                acc.remove(m);
            }
        }
        None => {
            acc.insert(m.clone(), c.clone());
        }
    }
}

/// The enveloping algebra `U(g)` of a Lie superalgebra, with memoized straightening.
pub struct Enveloping {
    lie: LieSuperAlgebra,
    letter_cache: RwLock<HashMap<(PbwMonomial, usize), Arc<LinComb>>>,
    product_cache: RwLock<HashMap<(PbwMonomial, PbwMonomial), Arc<LinComb>>>,
}

impl fmt::Debug for Enveloping {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Enveloping").field("lie", &self.lie).finish()
    }
}

impl Enveloping {
    pub fn new(lie: LieSuperAlgebra) -> Arc<Enveloping> {
        if lie.odd_dim() > 64 {
            panic!("at most 64 odd basis vectors are supported");
        }
        Arc::new(Enveloping {
            lie,
            letter_cache: RwLock::new(HashMap::new()),
            product_cache: RwLock::new(HashMap::new()),
        })
    }

    pub fn lie(&self) -> &LieSuperAlgebra {
        &self.lie
    }

    /// Product of two normal monomials, straightened into normal form over the ground field.
    pub fn mul_monomials(&self, a: &PbwMonomial, b: &PbwMonomial) -> Arc<LinComb> {
        if b.is_one() {
            return Arc::new(LinComb::from([(a.clone(), self.lie.field().one())]));
        }
        let key = (a.clone(), b.clone());
        if let Some(hit) = self.product_cache.read().get(&key) {
            return hit.clone();
        }
        let mut cur = LinComb::from([(a.clone(), self.lie.field().one())]);
        for l in b.letters() {
            let mut next = LinComb::new();
            for (m, c) in &cur {
                for (m2, c2) in self.mul_letter(m, l).iter() {
                    lin_add(&mut next, m2, &(c * c2));
                }
            }
            cur = next;
        }
        let out = Arc::new(cur);
        self.product_cache.write().insert(key, out.clone());
        out
    }

    fn letter_in_order(&self, a: usize, l: usize) -> bool {
        let m = self.lie.even_dim();
        match (a < m, l < m) {
            (true, true) => a <= l,
            (true, false) => true,
            (false, true) => false,
            (false, false) => a < l,
        }
    }

    /// `M * z_l` for a normal monomial `M` and a single basis letter.
    pub fn mul_letter(&self, mono: &PbwMonomial, l: usize) -> Arc<LinComb> {
        let key = (mono.clone(), l);
        if let Some(hit) = self.letter_cache.read().get(&key) {
            return hit.clone();
        }
        let out = Arc::new(self.mul_letter_uncached(mono, l));
        self.letter_cache.write().insert(key, out.clone());
        out
    }

    fn mul_letter_uncached(&self, mono: &PbwMonomial, l: usize) -> LinComb {
        let g = &self.lie;
        let f = g.field();
        let m = g.even_dim();
        let Some((rest, a)) = mono.split_last() else {
            return LinComb::from([(PbwMonomial::letter(m, l), f.one())]);
        };
        let mut out = LinComb::new();
        if self.letter_in_order(a, l) {
            let mut n = mono.clone();
            if l < m {
                n.even[l] += 1;
            } else {
                n.odd |= 1u64 << (l - m);
            }
            out.insert(n, f.one());
            return out;
        }
        if a == l {
            // odd letter squared: replace by its 2-operation value
            let sq = g.two_op_basis(a - m).clone();
            self.add_times_vector(&mut out, &rest, &sq, &f.one());
            return out;
        }
        // a l = s * l a + [a, l], with s = -1 exactly when both letters are odd
        let s = crate::scalar::sign(f, g.parity(a).koszul(g.parity(l)));
        let swapped = self.mul_letter(&rest, l);
        for (n, c) in swapped.iter() {
            for (n2, c2) in self.mul_letter(n, a).iter() {
                lin_add(&mut out, n2, &(&s * &(c * c2)));
            }
        }
        let br = g.bracket_basis(a, l).clone();
        self.add_times_vector(&mut out, &rest, &br, &f.one());
        out
    }

    fn add_times_vector(&self, out: &mut LinComb, mono: &PbwMonomial, v: &[Scalar], scale: &Scalar) {
        for (k, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let cc = scale * c;
            for (n, c2) in self.mul_letter(mono, k).iter() {
                lin_add(out, n, &(&cc * c2));
            }
        }
    }
}

/// An element of `U(g)_A = A ⊗ U(g)`, stored as `sum a_M ⊗ M` over normal monomials `M`.
#[derive(Clone)]
pub struct UEnvElement {
    env: Arc<Enveloping>,
    alg: GrassmannAlgebra,
    terms: BTreeMap<PbwMonomial, GrassmannElement>,
}

impl fmt::Debug for UEnvElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UEnvElement({self})")
    }
}

impl PartialEq for UEnvElement {
    fn eq(&self, o: &UEnvElement) -> bool {
        self.alg == o.alg && same_env(&self.env, &o.env) && self.terms == o.terms
    }
}

impl Eq for UEnvElement {}

pub(crate) fn same_env(a: &Arc<Enveloping>, b: &Arc<Enveloping>) -> bool {
    Arc::ptr_eq(a, b) || a.lie == b.lie
}

impl UEnvElement {
    pub fn zero(env: &Arc<Enveloping>, alg: GrassmannAlgebra) -> UEnvElement {
        UEnvElement { env: env.clone(), alg, terms: BTreeMap::new() }
    }

    pub fn one(env: &Arc<Enveloping>, alg: GrassmannAlgebra) -> UEnvElement {
        UEnvElement::scalar(env, alg.one())
    }

    /// `a ⊗ 1`.
    pub fn scalar(env: &Arc<Enveloping>, a: GrassmannElement) -> UEnvElement {
        let m = env.lie.even_dim();
        UEnvElement::monomial(env, PbwMonomial::one(m), a)
    }

    /// `a ⊗ M`.
    pub fn monomial(env: &Arc<Enveloping>, mono: PbwMonomial, a: GrassmannElement) -> UEnvElement {
        let alg = a.algebra();
        let mut u = UEnvElement::zero(env, alg);
        u.add_term(mono, &a);
        u
    }

    /// The degree-one element `sum a_i ⊗ z_i`.
    pub fn from_lie(env: &Arc<Enveloping>, x: &LieSuperElementA) -> UEnvElement {
        let m = env.lie.even_dim();
        let mut u = UEnvElement::zero(env, x.algebra());
        for (i, c) in x.coeffs().iter().enumerate() {
            u.add_term(PbwMonomial::letter(m, i), c);
        }
        u
    }

    pub fn env(&self) -> &Arc<Enveloping> {
        &self.env
    }

    pub fn algebra(&self) -> GrassmannAlgebra {
        self.alg
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PbwMonomial, &GrassmannElement)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, mono: &PbwMonomial) -> GrassmannElement {
        self.terms.get(mono).cloned().unwrap_or_else(|| self.alg.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub(crate) fn add_term(&mut self, mono: PbwMonomial, a: &GrassmannElement) {
        if a.is_zero() {
            return;
        }
        match self.terms.get_mut(&mono) {
            Some(x) => {
                *x = x.add(a);
                if x.is_zero() {
                    self.terms.remove(&mono);
                }
            }
            None => {
                self.terms.insert(mono, a.clone());
            }
        }
    }

    fn check_same(&self, o: &UEnvElement) -> Result<()> {
        if self.alg != o.alg {
            return Err(Error::AlgebraMismatch("enveloping elements over different Grassmann algebras".into()));
        }
        if !same_env(&self.env, &o.env) {
            return Err(Error::AlgebraMismatch("enveloping elements of different Lie superalgebras".into()));
        }
        Ok(())
    }

    pub fn checked_add(&self, o: &UEnvElement) -> Result<UEnvElement> {
        self.check_same(o)?;
        let mut out = self.clone();
        for (m, a) in &o.terms {
            out.add_term(m.clone(), a);
        }
        Ok(out)
    }

    pub fn add(&self, o: &UEnvElement) -> UEnvElement {
        self.checked_add(o).expect("incompatible enveloping elements")
    }

    pub fn neg(&self) -> UEnvElement {
        let mut out = self.clone();
        for a in out.terms.values_mut() {
            *a = a.neg();
        }
        out
    }

    pub fn sub(&self, o: &UEnvElement) -> UEnvElement {
        self.add(&o.neg())
    }

    /// Left multiplication by `a ∈ A`: `a (b ⊗ M) = ab ⊗ M`.
    pub fn scale_left(&self, a: &GrassmannElement) -> UEnvElement {
        let mut out = UEnvElement::zero(&self.env, self.alg);
        for (m, b) in &self.terms {
            out.add_term(m.clone(), &a.mul(b));
        }
        out
    }

    /// `(a ⊗ M)(b ⊗ N) = (-1)^{|M||b|} ab ⊗ MN`.
    pub fn checked_mul(&self, o: &UEnvElement) -> Result<UEnvElement> {
        self.check_same(o)?;
        let mut out = UEnvElement::zero(&self.env, self.alg);
        for (n, b) in &o.terms {
            let b_even = b.even_part();
            let b_odd = b.odd_part();
            for (mm, a) in &self.terms {
                let coeff = if mm.parity().is_odd() {
                    a.mul(&b_even.sub(&b_odd))
                } else {
                    a.mul(b)
                };
                if coeff.is_zero() {
                    continue;
                }
                for (p, c) in self.env.mul_monomials(mm, n).iter() {
                    out.add_term(p.clone(), &coeff.scale(c));
                }
            }
        }
        Ok(out)
    }

    pub fn mul(&self, o: &UEnvElement) -> UEnvElement {
        self.checked_mul(o).expect("incompatible enveloping elements")
    }

    /// Parity of the element if homogeneous (coefficient parity plus monomial parity).
    pub fn parity(&self) -> Option<Parity> {
        let mut seen = None;
        for (m, a) in &self.terms {
            for (mask, _) in a.terms() {
                let p = Parity::from_bit(mask.count_ones()) + m.parity();
                match seen {
                    None => seen = Some(p),
                    Some(q) if q != p => return None,
                    _ => {}
                }
            }
        }
        Some(seen.unwrap_or(Parity::Even))
    }

    /// True when every monomial lies in `U(g_0)` (no odd letters).
    pub fn in_even_subalgebra(&self) -> bool {
        self.terms.keys().all(PbwMonomial::is_even_part)
    }

    /// Splits `u = sum_S f_S v_S` by odd subset `S`, returning each block `f_S ∈ U(g_0)_A`.
    pub fn odd_blocks(&self) -> BTreeMap<u64, UEnvElement> {
        let mut out: BTreeMap<u64, UEnvElement> = BTreeMap::new();
        for (m, a) in &self.terms {
            let block = out.entry(m.odd).or_insert_with(|| UEnvElement::zero(&self.env, self.alg));
            block.add_term(PbwMonomial { even: m.even.clone(), odd: 0 }, a);
        }
        out
    }

    /// Applies a map to every Grassmann coefficient (used for pushing forward along `A -> A'`).
    pub fn map_coefficients(
        &self,
        target: GrassmannAlgebra,
        f: impl Fn(&GrassmannElement) -> Result<GrassmannElement>,
    ) -> Result<UEnvElement> {
        let mut out = UEnvElement::zero(&self.env, target);
        for (m, a) in &self.terms {
            out.add_term(m.clone(), &f(a)?);
        }
        Ok(out)
    }

    /// The coefficient of the unit monomial.
    pub fn counit(&self) -> GrassmannElement {
        self.coefficient(&PbwMonomial::one(self.env.lie.even_dim()))
    }
}

impl fmt::Display for UEnvElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, a)| {
                if m.is_one() {
                    format!("({a})")
                } else {
                    format!("({a})⊗{}", m.format(&self.env.lie))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

//! The supergroup `Γ` built from a Harish-Chandra pair, through its `A`-points for Grassmann
//! algebras `A`: normal forms `g e(a_1, v_1) ... e(a_n, v_n)`, the rewriting group law, an
//! independent pair-model computation inside `G ⋉ U(g)_A`, Lie-level extraction, and witness
//! tests for normalizer and centralizer sub-pairs.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde_json::{json, Value};

use crate::env::{e_factor, f_factor, AutomorphismData, Enveloping, PbwMonomial, UEnvElement};
use crate::error::{Error, Result};
use crate::grassmann::{GrassmannAlgebra, GrassmannElement};
use crate::group::{amat_add, amat_from_scalars, amat_identity, amat_scale, GroupAction, GroupPoint, MatrixGroup};
use crate::hcp::{HCPair, SubPairData, SubPairKind};
use crate::liesuper::{LieSuperAlgebra, LieSuperElementA};
use crate::linalg::{self, Vector};
use crate::parity::Parity;
use crate::poly::Polynomial;
use crate::report::Report;
use crate::scalar::{Field, Scalar};

pub const ROUNDTRIP_SUITE: &str = "roundtrip";
pub const QUINTUPLE_SUITE: &str = "quintuple";

/// A point of `Γ(A)` in normal form `(g; a_1, ..., a_n)`.
#[derive(Clone, PartialEq, Eq)]
pub struct GammaElement {
    pub g: GroupPoint,
    pub a: Vec<GrassmannElement>,
}

impl fmt::Debug for GammaElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for GammaElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a: Vec<String> = self.a.iter().map(|x| x.to_string()).collect();
        write!(f, "({}; {})", self.g, a.join(", "))
    }
}

impl GammaElement {
    pub fn algebra(&self) -> GrassmannAlgebra {
        self.g.algebra()
    }

    pub fn is_identity(&self) -> bool {
        self.g.is_identity() && self.a.iter().all(GrassmannElement::is_zero)
    }

    /// `{"g": [[..]], "a": [..]}` with Grassmann elements in their text form.
    pub fn to_json(&self) -> Value {
        let g: Vec<Vec<String>> = self.g.matrix().iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
        let a: Vec<String> = self.a.iter().map(|x| x.to_string()).collect();
        json!({ "g": g, "a": a })
    }

    /// Applies a superalgebra map `A -> A'` given by the images of the generators.
    pub fn push_forward(&self, images: &[GrassmannElement]) -> Result<GammaElement> {
        let target = images.first().map_or(self.algebra(), |x| x.algebra());
        let m: Vec<Vec<GrassmannElement>> = self
            .g
            .matrix()
            .iter()
            .map(|r| r.iter().map(|x| x.hom_apply(images)).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        let g = GroupPoint::from_matrix_unchecked(target, m)?;
        let a = self.a.iter().map(|x| x.hom_apply(images)).collect::<Result<_>>()?;
        Ok(GammaElement { g, a })
    }
}

/// Generators for words in `Γ(A)`.
#[derive(Clone, Debug, PartialEq)]
pub enum Letter {
    /// A point `g ∈ G(A_0)`.
    Point(GroupPoint),
    /// `e(a, v)` with odd `a` and `v ∈ V` in coordinates.
    Odd { coeff: GrassmannElement, vector: Vector },
    /// `f(ε, x)` with even square-zero `ε` and `x ∈ Lie(G)` in coordinates.
    Even { coeff: GrassmannElement, vector: Vector },
}

impl Letter {
    pub fn odd_basis(coeff: GrassmannElement, n: usize, i: usize) -> Letter {
        let f = coeff.field();
        Letter::Odd { coeff, vector: linalg::unit_vector(f, n, i) }
    }

    pub fn even_basis(coeff: GrassmannElement, r: usize, i: usize) -> Letter {
        let f = coeff.field();
        Letter::Even { coeff, vector: linalg::unit_vector(f, r, i) }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::Point(p) => write!(f, "{p}"),
            Letter::Odd { coeff, vector } => write!(f, "e({coeff}, {vector:?})"),
            Letter::Even { coeff, vector } => write!(f, "f({coeff}, {vector:?})"),
        }
    }
}

/// An element `(g, u)` of `G(A_0) ⋉ Σ(A)`, with `u` a grouplike of `U(g)_A`.
#[derive(Clone, Debug, PartialEq)]
pub struct PairModelElement {
    pub g: GroupPoint,
    pub u: UEnvElement,
}

/// The supergroup attached to a Harish-Chandra pair.
#[derive(Clone, Debug)]
pub struct Gamma {
    pair: HCPair,
    lie: LieSuperAlgebra,
    env: Arc<Enveloping>,
    action: GroupAction,
}

impl Gamma {
    /// Validates the pair and builds its enveloping algebra.
    pub fn new(pair: HCPair) -> Result<Gamma> {
        let lie = pair.assemble_lie()?;
        let action = pair.action().clone();
        Ok(Gamma { env: Enveloping::new(lie.clone()), pair, lie, action })
    }

    /// Builds the structure with a replaced superalgebra and/or action and no validation, so
    /// that checks can be run against deliberately inconsistent data.
    pub fn with_overrides(pair: HCPair, lie: Option<LieSuperAlgebra>, action: Option<GroupAction>) -> Gamma {
        let lie = lie.unwrap_or_else(|| pair.lie_unchecked().clone());
        let action = action.unwrap_or_else(|| pair.action().clone());
        Gamma { env: Enveloping::new(lie.clone()), pair, lie, action }
    }

    pub fn pair(&self) -> &HCPair {
        &self.pair
    }

    pub fn group(&self) -> &MatrixGroup {
        self.pair.group()
    }

    pub fn lie(&self) -> &LieSuperAlgebra {
        &self.lie
    }

    pub fn env(&self) -> &Arc<Enveloping> {
        &self.env
    }

    pub fn field(&self) -> Field {
        self.pair.field()
    }

    pub fn odd_dim(&self) -> usize {
        self.pair.odd_dim()
    }

    pub fn even_dim(&self) -> usize {
        self.pair.lie_dim()
    }

    pub fn identity(&self, alg: GrassmannAlgebra) -> GammaElement {
        GammaElement { g: self.group().identity(alg), a: vec![alg.zero(); self.odd_dim()] }
    }

    /// A normal form from its components; `g` must lie in `G(A_0)` and every `a_i` must be odd.
    pub fn element(&self, g: GroupPoint, a: Vec<GrassmannElement>) -> Result<GammaElement> {
        if a.len() != self.odd_dim() {
            return Err(Error::Dimension(format!("{} odd coefficients, expected {}", a.len(), self.odd_dim())));
        }
        if a.iter().any(|x| x.algebra() != g.algebra()) {
            return Err(Error::AlgebraMismatch("coefficients over a different Grassmann algebra".into()));
        }
        if a.iter().any(|x| !x.is_zero() && x.parity() != Some(Parity::Odd)) {
            return Err(Error::Parity("odd coefficients must be odd".into()));
        }
        if !self.group().contains(&g)? {
            return Err(Error::Precondition(format!("{g} is not a point of the group")));
        }
        Ok(GammaElement { g, a })
    }

    /// Parses `{"g": [[..]], "a": [..]}` over `alg`.
    pub fn element_from_json(&self, alg: GrassmannAlgebra, v: &Value) -> Result<GammaElement> {
        let parse = |x: &Value| -> Result<GrassmannElement> {
            match x {
                Value::String(s) => alg.parse(s),
                Value::Number(n) => alg.parse(&n.to_string()),
                _ => Err(Error::Parse(format!("expected a Grassmann element, found {x}"))),
            }
        };
        let g = v.get("g").and_then(Value::as_array).ok_or_else(|| Error::Parse("missing \"g\" matrix".into()))?;
        let matrix = g
            .iter()
            .map(|r| r.as_array().ok_or_else(|| Error::Parse("matrix rows must be arrays".into()))?.iter().map(parse).collect())
            .collect::<Result<Vec<Vec<_>>>>()?;
        let a = match v.get("a") {
            None => vec![alg.zero(); self.odd_dim()],
            Some(a) => a.as_array().ok_or_else(|| Error::Parse("\"a\" must be an array".into()))?.iter().map(parse).collect::<Result<_>>()?,
        };
        let g = self.group().point(alg, matrix)?;
        self.element(g, a)
    }

    fn odd_rows(&self, k: &GroupPoint) -> Result<Vec<Vec<GrassmannElement>>> {
        let r = self.even_dim();
        let pm = self.action.action_matrix(k)?;
        Ok(pm[r..].iter().map(|row| row[r..].to_vec()).collect())
    }

    fn infinitesimal(&self, alg: GrassmannAlgebra, eps: &GrassmannElement, x: &[Scalar]) -> Result<GroupPoint> {
        let g = self.group();
        let m = amat_add(&amat_identity(alg, g.size()), &amat_scale(&amat_from_scalars(alg, &g.lie_matrix(x)), eps));
        GroupPoint::from_matrix_unchecked(alg, m)
    }

    /// `nf · k` for a point `k`: `g E(a) k = (g k) E(a)^k`, then re-sorting.
    fn mul_point(&self, nf: GammaElement, k: &GroupPoint) -> Result<GammaElement> {
        if k.is_identity() {
            return Ok(nf);
        }
        let alg = nf.algebra();
        let n = self.odd_dim();
        let mut out = GammaElement { g: nf.g.mul_unchecked(k), a: vec![alg.zero(); n] };
        if nf.a.iter().all(GrassmannElement::is_zero) {
            return Ok(out);
        }
        let c = self.odd_rows(k)?;
        for (i, ai) in nf.a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (l, cil) in c[i].iter().enumerate() {
                if !cil.is_zero() {
                    out = self.mul_e(out, ai.mul(cil), l)?;
                }
            }
        }
        Ok(out)
    }

    /// `nf · e(b, v_j)`, moving the new factor left past larger indices and merging equal ones.
    fn mul_e(&self, mut nf: GammaElement, b: GrassmannElement, j: usize) -> Result<GammaElement> {
        if b.is_zero() {
            return Ok(nf);
        }
        let alg = nf.algebra();
        let n = self.odd_dim();
        if let Some(k) = (j + 1..n).rev().find(|&k| !nf.a[k].is_zero()) {
            // e(a_k, v_k) e(b, v_j) = f(-a_k b, [v_k, v_j]) e(b, v_j) e(a_k, v_k)
            let ak = std::mem::replace(&mut nf.a[k], alg.zero());
            let eps = ak.mul(&b).neg();
            let mut prefix = nf;
            if !eps.is_zero() {
                let r = self.even_dim();
                let p = self.infinitesimal(alg, &eps, &self.lie.bracket_basis(r + k, r + j)[..r])?;
                prefix = self.mul_point(prefix, &p)?;
            }
            let with_b = self.mul_e(prefix, b, j)?;
            return self.mul_e(with_b, ak, k);
        }
        if nf.a[j].is_zero() {
            nf.a[j] = b;
            return Ok(nf);
        }
        // e(a, v) e(b, v) = f(-ab, v<2>) e(a + b, v)
        let aj = std::mem::replace(&mut nf.a[j], alg.zero());
        let eps = aj.mul(&b).neg();
        let mut prefix = nf;
        if !eps.is_zero() {
            let p = self.infinitesimal(alg, &eps, self.lie.two_op_basis(j))?;
            prefix = self.mul_point(prefix, &p)?;
        }
        self.mul_e(prefix, aj.add(&b), j)
    }

    fn check_letter(&self, alg: GrassmannAlgebra, letter: &Letter) -> Result<()> {
        match letter {
            Letter::Point(p) => {
                if p.algebra() != alg {
                    return Err(Error::AlgebraMismatch("point over a different Grassmann algebra".into()));
                }
                if !self.group().contains(p)? {
                    return Err(Error::Precondition(format!("{p} is not a point of the group")));
                }
            }
            Letter::Odd { coeff, vector } => {
                if coeff.algebra() != alg || vector.len() != self.odd_dim() {
                    return Err(Error::Dimension("odd letter has the wrong shape".into()));
                }
                if !coeff.is_zero() && coeff.parity() != Some(Parity::Odd) {
                    return Err(Error::Parity(format!("e-factor coefficient {coeff} is not odd")));
                }
            }
            Letter::Even { coeff, vector } => {
                if coeff.algebra() != alg || vector.len() != self.even_dim() {
                    return Err(Error::Dimension("even letter has the wrong shape".into()));
                }
                if !coeff.is_zero() && coeff.parity() != Some(Parity::Even) {
                    return Err(Error::Parity(format!("f-factor coefficient {coeff} is not even")));
                }
                if !coeff.mul(coeff).is_zero() {
                    return Err(Error::Precondition(format!("f-factor coefficient {coeff} does not square to zero")));
                }
            }
        }
        Ok(())
    }

    fn mul_letter(&self, nf: GammaElement, letter: &Letter) -> Result<GammaElement> {
        match letter {
            Letter::Point(p) => self.mul_point(nf, p),
            Letter::Odd { coeff, vector } => {
                // e(a, Σ c_i v_i) = Π_i e(c_i a, v_i)
                let mut out = nf;
                for (i, c) in vector.iter().enumerate() {
                    if !c.is_zero() {
                        out = self.mul_e(out, coeff.scale(c), i)?;
                    }
                }
                Ok(out)
            }
            Letter::Even { coeff, vector } => {
                let p = self.infinitesimal(nf.algebra(), coeff, vector)?;
                self.mul_point(nf, &p)
            }
        }
    }

    /// Normal form of a word.
    pub fn from_word(&self, alg: GrassmannAlgebra, word: &[Letter]) -> Result<GammaElement> {
        for l in word {
            self.check_letter(alg, l)?;
        }
        word.iter().try_fold(self.identity(alg), |nf, l| self.mul_letter(nf, l))
    }

    /// Normal form of `p` followed by one more letter.
    pub fn append(&self, p: &GammaElement, letter: &Letter) -> Result<GammaElement> {
        self.check_letter(p.algebra(), letter)?;
        self.mul_letter(p.clone(), letter)
    }

    /// The word `[g, e(a_1, v_1), ..., e(a_n, v_n)]` of a normal form.
    pub fn word_of(&self, p: &GammaElement) -> Vec<Letter> {
        let n = self.odd_dim();
        let mut w = vec![Letter::Point(p.g.clone())];
        w.extend(p.a.iter().enumerate().filter(|(_, a)| !a.is_zero()).map(|(i, a)| Letter::odd_basis(a.clone(), n, i)));
        w
    }

    pub fn mul(&self, p: &GammaElement, q: &GammaElement) -> Result<GammaElement> {
        if p.algebra() != q.algebra() || p.a.len() != self.odd_dim() || q.a.len() != self.odd_dim() {
            return Err(Error::AlgebraMismatch("elements from different contexts".into()));
        }
        let mut out = self.mul_point(p.clone(), &q.g)?;
        for (i, a) in q.a.iter().enumerate() {
            out = self.mul_e(out, a.clone(), i)?;
        }
        Ok(out)
    }

    /// `e(-a_n, v_n) ... e(-a_1, v_1) g^{-1}`.
    pub fn inv(&self, p: &GammaElement) -> Result<GammaElement> {
        let alg = p.algebra();
        let mut out = self.identity(alg);
        for (i, a) in p.a.iter().enumerate().rev() {
            out = self.mul_e(out, a.neg(), i)?;
        }
        self.mul_point(out, &p.g.inverse_unchecked())
    }

    /// `p^{-1} q^{-1} p q`.
    pub fn commutator(&self, p: &GammaElement, q: &GammaElement) -> Result<GammaElement> {
        let pi = self.inv(p)?;
        let qi = self.inv(q)?;
        self.mul(&self.mul(&self.mul(&pi, &qi)?, p)?, q)
    }

    /// The Hopf automorphism of `U(g)_A` induced by a point.
    pub fn automorphism(&self, h: &GroupPoint) -> Result<AutomorphismData> {
        let alg = h.algebra();
        let pm = self.action.action_matrix(h)?;
        let images = pm.into_iter().map(|row| LieSuperElementA::from_coeffs(alg, row)).collect::<Result<_>>()?;
        AutomorphismData::new(&self.env, images)
    }

    fn full_odd(&self, v: &[Scalar]) -> Vector {
        let mut out = linalg::zero_vector(self.field(), self.even_dim());
        out.extend_from_slice(v);
        out
    }

    /// A letter as an element of the pair model.
    pub fn pm_letter(&self, alg: GrassmannAlgebra, letter: &Letter) -> Result<PairModelElement> {
        self.check_letter(alg, letter)?;
        let one = UEnvElement::one(&self.env, alg);
        Ok(match letter {
            Letter::Point(p) => PairModelElement { g: p.clone(), u: one },
            Letter::Odd { coeff, vector } => {
                PairModelElement { g: self.group().identity(alg), u: e_factor(&self.env, coeff, &self.full_odd(vector))? }
            }
            Letter::Even { coeff, vector } => {
                PairModelElement { g: self.group().identity(alg), u: f_factor(&self.env, coeff, &self.lie.embed_even(vector))? }
            }
        })
    }

    /// `(g, u)(h, w) = (gh, u^h w)`.
    pub fn pm_mul(&self, p: &PairModelElement, q: &PairModelElement) -> Result<PairModelElement> {
        let uh = if q.g.is_identity() { p.u.clone() } else { self.automorphism(&q.g)?.apply(&p.u)? };
        Ok(PairModelElement { g: p.g.mul_unchecked(&q.g), u: uh.checked_mul(&q.u)? })
    }

    pub fn pm_from_word(&self, alg: GrassmannAlgebra, word: &[Letter]) -> Result<PairModelElement> {
        let mut acc = PairModelElement { g: self.group().identity(alg), u: UEnvElement::one(&self.env, alg) };
        for l in word {
            acc = self.pm_mul(&acc, &self.pm_letter(alg, l)?)?;
        }
        Ok(acc)
    }

    /// Normal form of a pair-model element; fails unless `u` is grouplike and of the form
    /// `f · e(a_1, v_1) ... e(a_n, v_n)` with `f ∈ U(g_0)_A`.
    pub fn pm_normalize(&self, p: &PairModelElement) -> Result<GammaElement> {
        if !p.u.is_grouplike() {
            return Err(Error::Precondition("pair-model element is not grouplike".into()));
        }
        let (nf, f) = self.pm_split(p)?;
        // u must equal f · E(a)
        let mut rebuilt = f;
        for (i, a) in nf.a.iter().enumerate() {
            if !a.is_zero() {
                let v = self.full_odd(&linalg::unit_vector(self.field(), self.odd_dim(), i));
                rebuilt = rebuilt.checked_mul(&e_factor(&self.env, a, &v)?)?;
            }
        }
        if rebuilt != p.u {
            return Err(Error::Precondition("grouplike is not determined by its low odd blocks".into()));
        }
        Ok(nf)
    }

    /// Reads the normal form from the blocks at `∅` and `{i}` without further checks.
    pub fn pm_normalize_unchecked(&self, p: &PairModelElement) -> Result<GammaElement> {
        Ok(self.pm_split(p)?.0)
    }

    fn pm_split(&self, p: &PairModelElement) -> Result<(GammaElement, UEnvElement)> {
        let alg = p.u.algebra();
        let m = self.even_dim();
        let blocks = p.u.odd_blocks();
        let f = blocks.get(&0).cloned().ok_or_else(|| Error::Precondition("grouplike has no even block".into()))?;
        let f_inv = f.antipode();
        let one = PbwMonomial::one(m);
        let mut a = Vec::with_capacity(self.odd_dim());
        for i in 0..self.odd_dim() {
            let mask = PbwMonomial::letter(m, m + i).odd_mask();
            let ai = match blocks.get(&mask) {
                None => alg.zero(),
                Some(b) => {
                    let prod = f_inv.checked_mul(b)?;
                    let ai = prod.coefficient(&one);
                    if prod.num_terms() > usize::from(!ai.is_zero()) {
                        return Err(Error::Precondition("odd block is not a scalar multiple of the even block".into()));
                    }
                    ai
                }
            };
            a.push(ai);
        }
        let g = p.g.mul_unchecked(&self.group().grouplike_to_point_unchecked(&f)?);
        Ok((GammaElement { g, a }, f))
    }

    /// Whether `p` lies in the sub-supergroup of a sub-pair: `g ∈ H` and `a ∈ W ⊗ A_1`.
    pub fn membership(&self, sub: &SubPairData, p: &GammaElement) -> Result<bool> {
        if !sub.subgroup().contains(&p.g)? {
            return Ok(false);
        }
        let f = self.field();
        let n = self.odd_dim();
        let qm = linalg::quotient_map(f, sub.odd_basis(), n);
        let alg = p.algebra();
        for l in 0..qm.first().map_or(0, Vec::len) {
            let v = p.a.iter().zip(&qm).fold(alg.zero(), |acc, (x, q)| acc.add(&x.scale(&q[l])));
            if !v.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Evaluates `Σ c ⊗ w_S` on `p`: `c ↦ c(g)`, `w_i ↦ a_i`, multiplicatively in increasing order.
    pub fn point_as_map(&self, p: &GammaElement, terms: &[(Polynomial, u64)]) -> Result<GrassmannElement> {
        let alg = p.algebra();
        let mut out = alg.zero();
        for (c, mask) in terms {
            let mut val = self.group().eval(c, &p.g)?;
            for i in 0..self.odd_dim() {
                if mask & (1 << i) != 0 {
                    val = val.mul(&p.a[i]);
                }
            }
            if *mask >> self.odd_dim() != 0 {
                return Err(Error::Dimension(format!("wedge mask {mask:#b} exceeds the odd dimension")));
            }
            out = out.add(&val);
        }
        Ok(out)
    }

    /// A random normal form: a product of sample points times random odd coefficients.
    pub fn random_element(&self, alg: GrassmannAlgebra, samples: &[GroupPoint], rng: &mut impl Rng) -> GammaElement {
        let g = if samples.is_empty() {
            self.group().identity(alg)
        } else {
            let a = &samples[rng.gen_range(0..samples.len())];
            let b = &samples[rng.gen_range(0..samples.len())];
            a.mul_unchecked(b)
        };
        let a = (0..self.odd_dim()).map(|_| random_odd(alg, rng)).collect();
        GammaElement { g, a }
    }

    /// The group-law axioms on seeded random triples.
    pub fn check_group_law(&self, alg: GrassmannAlgebra, triples: usize, rng: &mut impl Rng) -> Report {
        let mut r = Report::new();
        let samples = self.pair.group_samples(alg);
        let id = self.identity(alg);
        for t in 0..triples {
            let p = self.random_element(alg, &samples, rng);
            let q = self.random_element(alg, &samples, rng);
            let s = self.random_element(alg, &samples, rng);
            let assoc = (|| -> Result<bool> {
                Ok(self.mul(&self.mul(&p, &q)?, &s)? == self.mul(&p, &self.mul(&q, &s)?)?)
            })();
            r.record("group-law", "associativity", assoc.unwrap_or(false), || format!("triple {t}: {p}, {q}, {s}"));
            let unit = self.mul(&p, &id).is_ok_and(|x| x == p) && self.mul(&id, &p).is_ok_and(|x| x == p);
            r.record("group-law", "unit", unit, || format!("triple {t}: {p}"));
            let inv = self.inv(&p).and_then(|pi| Ok(self.mul(&p, &pi)?.is_identity() && self.mul(&pi, &p)?.is_identity()));
            r.record("group-law", "inverse", inv.unwrap_or(false), || format!("triple {t}: {p}"));
        }
        r
    }

    /// Conditions on the quintuple `(Σ, F, G, i, α)`: `F` is a subgroup on which `i` is
    /// multiplicative, `φ^{i(f)} = f^{-1} φ f`, and `F` is `G`-stable with `i(f^g) = g^{-1} i(f) g`.
    pub fn check_quintuple(&self, alg: GrassmannAlgebra) -> Report {
        let mut r = Report::new();
        let fs = self.f_samples(alg);
        let phis = self.sigma_samples(alg);
        let group = self.group();
        for (a, f1) in fs.iter().enumerate() {
            let inv = f1.antipode();
            let ok = inv.in_even_subalgebra() && inv.is_grouplike() && f1.mul(&inv) == UEnvElement::one(&self.env, alg);
            r.record(QUINTUPLE_SUITE, "subgroup", ok, || format!("inverse of f-sample {a}"));
            for (b, f2) in fs.iter().enumerate() {
                let prod = f1.mul(f2);
                let closed = prod.in_even_subalgebra() && prod.is_grouplike();
                let hom = match (
                    group.grouplike_to_point_unchecked(&prod),
                    group.grouplike_to_point_unchecked(f1),
                    group.grouplike_to_point_unchecked(f2),
                ) {
                    (Ok(x), Ok(y), Ok(z)) => x == y.mul_unchecked(&z),
                    _ => false,
                };
                r.record(QUINTUPLE_SUITE, "subgroup", closed && hom, || format!("f-samples {a}, {b}"));
            }
            let Ok(pf) = group.grouplike_to_point_unchecked(f1) else {
                r.record(QUINTUPLE_SUITE, "inner-compatibility", false, || format!("f-sample {a} has no point"));
                continue;
            };
            for (b, phi) in phis.iter().enumerate() {
                let ok = self.automorphism(&pf).and_then(|aut| aut.apply(phi)).is_ok_and(|lhs| lhs == inv.mul(phi).mul(f1));
                r.record(QUINTUPLE_SUITE, "inner-compatibility", ok, || format!("f-sample {a}, Σ-sample {b}"));
            }
        }
        let points = self.pair.group_samples(alg);
        for (s, g) in points.iter().enumerate() {
            let Ok(aut) = self.automorphism(g) else {
                r.record(QUINTUPLE_SUITE, "equivariance", false, || format!("point {s} has no automorphism"));
                continue;
            };
            for (a, f1) in fs.iter().enumerate() {
                let ok = (|| -> Result<bool> {
                    let fg = aut.apply(f1)?;
                    if !fg.in_even_subalgebra() || !fg.is_grouplike() {
                        return Ok(false);
                    }
                    let lhs = group.grouplike_to_point_unchecked(&fg)?;
                    let rhs = g.inverse_unchecked().mul_unchecked(&group.grouplike_to_point_unchecked(f1)?).mul_unchecked(g);
                    Ok(lhs == rhs)
                })();
                r.record(QUINTUPLE_SUITE, "equivariance", ok.unwrap_or(false), || format!("point {s}, f-sample {a}"));
            }
        }
        r
    }

    /// Products of one or two `f`-factors on distinct generator pairs.
    fn f_samples(&self, alg: GrassmannAlgebra) -> Vec<UEnvElement> {
        let r = self.even_dim();
        let ng = alg.generators();
        let mut out = Vec::new();
        if ng < 2 {
            return out;
        }
        let t = alg.generator(0).mul(&alg.generator(1));
        let s = if ng >= 4 { Some(alg.generator(2).mul(&alg.generator(3))) } else { None };
        for i in 0..r {
            let fi = f_factor(&self.env, &t, &self.lie.basis_vector(i)).expect("even basis vector");
            if let Some(s) = &s {
                for j in 0..r {
                    let fj = f_factor(&self.env, s, &self.lie.basis_vector(j)).expect("even basis vector");
                    out.push(fi.mul(&fj));
                }
            }
            out.push(fi);
        }
        out
    }

    /// Single `e`-factors on each generator and pairwise products.
    fn sigma_samples(&self, alg: GrassmannAlgebra) -> Vec<UEnvElement> {
        let n = self.odd_dim();
        let m = self.even_dim();
        let mut singles = Vec::new();
        for k in 0..alg.generators().min(3) {
            for i in 0..n {
                let v = self.lie.basis_vector(m + i);
                singles.push(e_factor(&self.env, &alg.generator(k), &v).expect("odd basis vector"));
            }
        }
        let mut out = singles.clone();
        for (a, x) in singles.iter().enumerate() {
            for y in singles.iter().skip(a + 1) {
                out.push(x.mul(y));
            }
        }
        out
    }

    /// Extraction of the pair from `Γ`: `Γ_ev` points, brackets and the 2-operation from
    /// commutators, the action on `V` from conjugation, and the presentation relations; all
    /// compared against `reference`. Needs at least four Grassmann generators.
    pub fn roundtrip_check(&self, reference: &HCPair, alg: GrassmannAlgebra) -> Report {
        let mut r = Report::new();
        if let Err(e) = self.roundtrip_into(reference, alg, &mut r) {
            r.record(ROUNDTRIP_SUITE, "evaluation", false, || e.to_string());
        }
        r
    }

    fn roundtrip_into(&self, reference: &HCPair, alg: GrassmannAlgebra, r: &mut Report) -> Result<()> {
        if alg.generators() < 4 {
            return Err(Error::Precondition("extraction needs at least four Grassmann generators".into()));
        }
        let f = self.field();
        let n = self.odd_dim();
        let rdim = self.even_dim();
        let group = self.group();
        let tau: Vec<GrassmannElement> = (0..4).map(|k| alg.generator(k)).collect();
        let t01 = tau[0].mul(&tau[1]);
        let t23 = tau[2].mul(&tau[3]);
        let e = |coeff: &GrassmannElement, i: usize| Letter::odd_basis(coeff.clone(), n, i);
        let samples = self.pair.group_samples(alg);

        r.record(ROUNDTRIP_SUITE, "odd-dimension", n == reference.odd_dim(), || {
            format!("odd dimension {n} vs {}", reference.odd_dim())
        });
        // Γ_ev: points of G embed and multiply as in G
        for (s, g) in samples.iter().enumerate() {
            for (t, h) in samples.iter().enumerate() {
                let pg = self.from_word(alg, &[Letter::Point(g.clone())])?;
                let ph = self.from_word(alg, &[Letter::Point(h.clone())])?;
                let ok = pg == GammaElement { g: g.clone(), a: vec![alg.zero(); n] }
                    && self.mul(&pg, &ph)? == GammaElement { g: g.mul_unchecked(h), a: vec![alg.zero(); n] };
                r.record(ROUNDTRIP_SUITE, "even-points", ok, || format!("samples {s}, {t}"));
            }
        }
        // [v_i, v_j] from e(τ0, v_i), e(τ1, v_j): the commutator is I - τ0τ1 [v_i, v_j]
        let read_lie = |p: &GammaElement, mask: u64, sign: bool| -> Option<Vector> {
            if p.a.iter().any(|x| !x.is_zero()) {
                return None;
            }
            let m = group.size();
            let mat: Vec<Vec<Scalar>> = (0..m)
                .map(|i| {
                    (0..m)
                        .map(|j| {
                            let c = p.g.entry(i, j).coefficient(mask);
                            if sign {
                                -c
                            } else {
                                c
                            }
                        })
                        .collect()
                })
                .collect();
            group.lie_coordinates(&mat)
        };
        for i in 0..n {
            for j in 0..n {
                let p = self.from_word(alg, &[e(&tau[0], i)])?;
                let q = self.from_word(alg, &[e(&tau[1], j)])?;
                let c = self.commutator(&self.inv(&p)?, &self.inv(&q)?)?;
                // (p q p^{-1} q^{-1}) with p = e(τ0, v_i), q = e(τ1, v_j)
                let got = read_lie(&c, 0b11, true);
                let want = reference.bracket_table()[i][j].clone();
                r.record(ROUNDTRIP_SUITE, "odd-bracket", got.as_ref() == Some(&want), || {
                    format!("[{}, {}]: extracted {:?}", reference.odd_names()[i], reference.odd_names()[j], got)
                });
            }
            // v<2> from e(τ0, v) e(τ1, v) = f(-τ0τ1, v<2>) e(τ0 + τ1, v)
            let p = self.from_word(alg, &[e(&tau[0], i), e(&tau[1], i)])?;
            let mut shape = p.a.iter().enumerate().all(|(k, x)| if k == i { *x == tau[0].add(&tau[1]) } else { x.is_zero() });
            let pg = GammaElement { g: p.g.clone(), a: vec![alg.zero(); n] };
            let got = read_lie(&pg, 0b11, true);
            let want = reference.lie_unchecked().two_op_basis(i).clone();
            shape &= got.as_ref() == Some(&want);
            r.record(ROUNDTRIP_SUITE, "two-operation", shape, || format!("{}: extracted {:?}", reference.odd_names()[i], got));
        }
        // [v_j, x_i] from e(τ0, v_j) and I + τ2τ3 X_i: the commutator is e(τ0τ2τ3, v_j ◁ x_i)
        for i in 0..rdim {
            let k = self.infinitesimal(alg, &t23, &linalg::unit_vector(f, rdim, i))?;
            let pk = self.from_word(alg, &[Letter::Point(k.clone())])?;
            for j in 0..n {
                let p = self.from_word(alg, &[e(&tau[0], j)])?;
                let c = self.commutator(&p, &pk)?;
                let got: Vector = c.a.iter().map(|x| x.coefficient(0b1101)).collect();
                let want = reference.triangle(&linalg::unit_vector(f, n, j), &linalg::unit_vector(f, rdim, i));
                let ok = c.g.is_identity() && got == want;
                r.record(ROUNDTRIP_SUITE, "odd-even-bracket", ok, || {
                    format!("[{}, {}]: extracted {:?}", reference.odd_names()[j], reference.even_names()[i], got)
                });
            }
            // [x_i, x_j] from I + τ0τ1 X_i and I + τ2τ3 X_j
            for j in 0..rdim {
                let ki = self.from_word(alg, &[Letter::Point(self.infinitesimal(alg, &t01, &linalg::unit_vector(f, rdim, i))?)])?;
                let kj = self.from_word(alg, &[Letter::Point(self.infinitesimal(alg, &t23, &linalg::unit_vector(f, rdim, j))?)])?;
                let c = self.commutator(&ki, &kj)?;
                let got = read_lie(&c, 0b1111, false);
                let want = reference.group().commutator_coordinates(i, j).ok();
                r.record(ROUNDTRIP_SUITE, "even-bracket", got.is_some() && got == want, || {
                    format!("[{}, {}]: extracted {:?}", reference.even_names()[i], reference.even_names()[j], got)
                });
            }
        }
        // action on V: g^{-1} e(τ0, v_j) g = e(τ0, v_j^g)
        for (s, g) in samples.iter().enumerate() {
            let rho = reference.rho_at(g)?;
            for j in 0..n {
                let c = self.from_word(alg, &[Letter::Point(g.inverse_unchecked()), e(&tau[0], j), Letter::Point(g.clone())])?;
                let want: Vec<GrassmannElement> = rho[j].iter().map(|x| tau[0].mul(x)).collect();
                let ok = c.g.is_identity() && c.a == want;
                r.record(ROUNDTRIP_SUITE, "odd-action", ok, || format!("sample {s}, {}", reference.odd_names()[j]));
            }
        }
        // presentation relations, both sides evaluated in the pair model
        let pm = |w: &[Letter]| -> Result<GammaElement> { self.pm_normalize_unchecked(&self.pm_from_word(alg, w)?) };
        for i in 0..n {
            for j in 0..n {
                let (a, b) = (&tau[0], &tau[1]);
                let lhs = pm(&[e(a, i), e(b, j)])?;
                let f1 = Letter::Even { coeff: a.mul(b).neg(), vector: reference.bracket_table()[i][j].clone() };
                let rhs = pm(&[f1, e(b, j), e(a, i)])?;
                r.record(ROUNDTRIP_SUITE, "presentation", lhs == rhs, || format!("odd-odd relation for ({i}, {j})"));
            }
            let (a, b) = (&tau[0], &tau[1]);
            let lhs = pm(&[e(a, i), e(b, i)])?;
            let f2 = Letter::Even { coeff: a.mul(b).neg(), vector: reference.lie_unchecked().two_op_basis(i).clone() };
            let rhs = pm(&[f2, e(&a.add(b), i)])?;
            r.record(ROUNDTRIP_SUITE, "presentation", lhs == rhs, || format!("repeated-odd relation for {i}"));
            for (s, g) in samples.iter().enumerate() {
                let lhs = pm(&[e(a, i), Letter::Point(g.clone())])?;
                let rho = reference.rho_at(g)?;
                let mut w = vec![Letter::Point(g.clone())];
                for (k, c) in rho[i].iter().enumerate() {
                    w.push(e(&a.mul(c), k));
                }
                let rhs = pm(&w)?;
                r.record(ROUNDTRIP_SUITE, "presentation", lhs == rhs, || format!("point relation for {i}, sample {s}"));
            }
        }
        Ok(())
    }

    /// Conjugation witness for `z ∈ V`: for sampled `h ∈ H(A_0)` and `e(b, w)` with `w ∈ W`,
    /// `e(τ, z) h e(τ, z)^{-1}` must stay in the sub-supergroup (normalizer) or equal `h`
    /// (centralizer). Returns the failing instances. Needs at least four Grassmann generators.
    pub fn witness(&self, sub: &SubPairData, kind: SubPairKind, z: &[Scalar], alg: GrassmannAlgebra) -> Result<Vec<String>> {
        if alg.generators() < 4 {
            return Err(Error::Precondition("witness tests need at least four Grassmann generators".into()));
        }
        let n = self.odd_dim();
        let tau = alg.generator(0);
        let small = GrassmannAlgebra::new(2, self.field())?;
        let images = [alg.generator(2), alg.generator(3)];
        let mut tests: Vec<(String, GammaElement)> = Vec::new();
        for (s, h) in sub.samples(small).into_iter().enumerate() {
            let m = h.matrix().iter().map(|row| row.iter().map(|x| x.hom_apply(&images)).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>()?;
            let g = GroupPoint::from_matrix_unchecked(alg, m)?;
            tests.push((format!("subgroup sample {s}"), GammaElement { g, a: vec![alg.zero(); n] }));
        }
        for (s, w) in sub.odd_basis().iter().enumerate() {
            let p = self.from_word(alg, &[Letter::Odd { coeff: alg.generator(1), vector: w.clone() }])?;
            tests.push((format!("e(τ2, w{s})"), p));
        }
        let ez = self.from_word(alg, &[Letter::Odd { coeff: tau.clone(), vector: z.to_vec() }])?;
        let ez_inv = self.inv(&ez)?;
        let mut failures = Vec::new();
        for (name, h) in tests {
            let c = self.mul(&self.mul(&ez, &h)?, &ez_inv)?;
            let ok = match kind {
                SubPairKind::Normalizer => self.membership(sub, &c)?,
                SubPairKind::Centralizer => c == h,
            };
            if !ok {
                failures.push(format!("conjugate of {name} is {c}"));
            }
        }
        Ok(failures)
    }
}

/// A random odd element: one to three odd monomials with small integer coefficients.
pub fn random_odd(alg: GrassmannAlgebra, rng: &mut impl Rng) -> GrassmannElement {
    let n = alg.generators();
    let f = alg.field();
    let mut out = alg.zero();
    if n == 0 {
        return out;
    }
    for _ in 0..rng.gen_range(0..=3) {
        let mut mask = 0u64;
        let degree = if n >= 3 && rng.gen_bool(0.3) { 3 } else { 1 };
        while mask.count_ones() < degree {
            mask |= 1 << rng.gen_range(0..n);
        }
        out = out.add(&alg.monomial(mask, f.from_i64(rng.gen_range(-2..=2))));
    }
    out
}

#[cfg(test)]
mod tests;

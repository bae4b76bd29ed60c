//! The grouplike factors `e(a, v) = 1 + a ⊗ v`, `f(ε, x) = 1 + ε ⊗ x`, their commutation
//! relations, and automorphisms of `U(g)_A` induced by even linear maps of `g`.

use std::sync::Arc;

use super::{Enveloping, PbwMonomial, UEnvElement};
use crate::error::{Error, Result};
use crate::grassmann::GrassmannElement;
use crate::liesuper::LieSuperElementA;
use crate::linalg::Vector;
use crate::parity::Parity;
use crate::scalar::Scalar;

fn check_support(env: &Enveloping, v: &[Scalar], want: Parity, what: &str) -> Result<()> {
    let g = env.lie();
    if v.len() != g.dim() {
        return Err(Error::Dimension(format!("{what}: vector of length {} for a {}-dimensional algebra", v.len(), g.dim())));
    }
    if v.iter().enumerate().any(|(i, c)| !c.is_zero() && g.parity(i) != want) {
        return Err(Error::Parity(format!("{what}: vector is not purely {want}")));
    }
    Ok(())
}

fn one_plus(env: &Arc<Enveloping>, coeff: &GrassmannElement, v: &[Scalar]) -> UEnvElement {
    let m = env.lie().even_dim();
    let mut u = UEnvElement::one(env, coeff.algebra());
    for (k, c) in v.iter().enumerate() {
        if !c.is_zero() {
            u.add_term(PbwMonomial::letter(m, k), &coeff.scale(c));
        }
    }
    u
}

/// `e(a, v) = 1 ⊗ 1 + a ⊗ v` for odd `a ∈ A` and `v` in the odd part of `g`.
pub fn e_factor(env: &Arc<Enveloping>, a: &GrassmannElement, v: &[Scalar]) -> Result<UEnvElement> {
    if !a.is_zero() && a.parity() != Some(Parity::Odd) {
        return Err(Error::Parity(format!("e-factor coefficient {a} is not odd")));
    }
    check_support(env, v, Parity::Odd, "e-factor")?;
    Ok(one_plus(env, a, v))
}

/// `e(a, v_j)` for the `j`-th odd basis vector (0-based among odd vectors).
pub fn e_factor_basis(env: &Arc<Enveloping>, a: &GrassmannElement, odd: usize) -> Result<UEnvElement> {
    let g = env.lie();
    if odd >= g.odd_dim() {
        return Err(Error::Dimension(format!("odd basis index {odd} out of range")));
    }
    e_factor(env, a, &g.basis_vector(g.odd_index(odd)))
}

/// `f(ε, x) = 1 ⊗ 1 + ε ⊗ x` for even `ε` with `ε² = 0` and `x` in the even part of `g`.
pub fn f_factor(env: &Arc<Enveloping>, eps: &GrassmannElement, x: &[Scalar]) -> Result<UEnvElement> {
    if !eps.is_zero() && eps.parity() != Some(Parity::Even) {
        return Err(Error::Parity(format!("f-factor coefficient {eps} is not even")));
    }
    if !eps.mul(eps).is_zero() {
        return Err(Error::Precondition(format!("f-factor coefficient {eps} does not square to zero")));
    }
    check_support(env, x, Parity::Even, "f-factor")?;
    Ok(one_plus(env, eps, x))
}

/// `f(ε, x_i)` for the `i`-th even basis vector.
pub fn f_factor_basis(env: &Arc<Enveloping>, eps: &GrassmannElement, even: usize) -> Result<UEnvElement> {
    let g = env.lie();
    if even >= g.even_dim() {
        return Err(Error::Dimension(format!("even basis index {even} out of range")));
    }
    f_factor(env, eps, &g.basis_vector(even))
}

/// The four commutation relations among `e` and `f` factors.
#[derive(Debug, Clone)]
pub enum Relation {
    /// `e(a,u) e(b,v) = f(-ab, [u,v]) e(b,v) e(a,u)`.
    OddOdd { a: GrassmannElement, b: GrassmannElement, u: Vector, v: Vector },
    /// `e(a,v) e(b,v) = f(-ab, v<2>) e(a+b, v)`.
    Repeated { a: GrassmannElement, b: GrassmannElement, v: Vector },
    /// `e(a,v) f(ε,x) = f(ε,x) e(a,v) e(εa, [v,x])`.
    OddEven { a: GrassmannElement, v: Vector, eps: GrassmannElement, x: Vector },
    /// `f(ε,x) f(η,y) = f(η,y) f(ε,x) f(εη, [x,y])`.
    EvenEven { eps: GrassmannElement, x: Vector, eta: GrassmannElement, y: Vector },
}

impl Relation {
    pub fn label(&self) -> &'static str {
        match self {
            Relation::OddOdd { .. } => "odd-odd",
            Relation::Repeated { .. } => "repeated-odd",
            Relation::OddEven { .. } => "odd-even",
            Relation::EvenEven { .. } => "even-even",
        }
    }
}

/// Expands both sides of a relation in `U(g)_A`, returning `(lhs, rhs)`.
pub fn verify_relation(env: &Arc<Enveloping>, rel: &Relation) -> Result<(UEnvElement, UEnvElement)> {
    let g = env.lie();
    match rel {
        Relation::OddOdd { a, b, u, v } => {
            let ea = e_factor(env, a, u)?;
            let eb = e_factor(env, b, v)?;
            let f = f_factor(env, &a.mul(b).neg(), &g.bracket(u, v))?;
            Ok((ea.mul(&eb), f.mul(&eb).mul(&ea)))
        }
        Relation::Repeated { a, b, v } => {
            let ea = e_factor(env, a, v)?;
            let eb = e_factor(env, b, v)?;
            let f = f_factor(env, &a.mul(b).neg(), &g.two_op_of(v))?;
            Ok((ea.mul(&eb), f.mul(&e_factor(env, &a.add(b), v)?)))
        }
        Relation::OddEven { a, v, eps, x } => {
            let ea = e_factor(env, a, v)?;
            let f = f_factor(env, eps, x)?;
            let e2 = e_factor(env, &eps.mul(a), &g.bracket(v, x))?;
            Ok((ea.mul(&f), f.mul(&ea).mul(&e2)))
        }
        Relation::EvenEven { eps, x, eta, y } => {
            let fx = f_factor(env, eps, x)?;
            let fy = f_factor(env, eta, y)?;
            let f2 = f_factor(env, &eps.mul(eta), &g.bracket(x, y))?;
            Ok((fx.mul(&fy), fy.mul(&fx).mul(&f2)))
        }
    }
}

/// An even `A`-linear map of `g_A` given by the images of the basis, extended multiplicatively.
#[derive(Debug, Clone)]
pub struct AutomorphismData {
    env: Arc<Enveloping>,
    images: Vec<LieSuperElementA>,
}

impl AutomorphismData {
    /// Images must have even coefficients and stay inside the parity component of their source.
    pub fn new(env: &Arc<Enveloping>, images: Vec<LieSuperElementA>) -> Result<AutomorphismData> {
        let g = env.lie();
        if images.len() != g.dim() {
            return Err(Error::Dimension(format!("{} images for a {}-dimensional algebra", images.len(), g.dim())));
        }
        for (i, img) in images.iter().enumerate() {
            if img.coeffs().len() != g.dim() {
                return Err(Error::Dimension(format!("image of {} has the wrong length", g.name(i))));
            }
            for (k, c) in img.coeffs().iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                if !c.is_even() {
                    return Err(Error::Parity(format!("image of {} has a non-even coefficient", g.name(i))));
                }
                if g.parity(k) != g.parity(i) {
                    return Err(Error::Parity(format!("image of {} leaves its parity component", g.name(i))));
                }
            }
        }
        Ok(AutomorphismData { env: env.clone(), images })
    }

    /// Builds the data from a ground-field matrix whose row `i` is the image of basis vector `i`.
    pub fn from_matrix(env: &Arc<Enveloping>, alg: crate::grassmann::GrassmannAlgebra, rows: &[Vector]) -> Result<AutomorphismData> {
        let images = rows.iter().map(|r| LieSuperElementA::from_vector(alg, r)).collect();
        AutomorphismData::new(env, images)
    }

    pub fn identity(env: &Arc<Enveloping>, alg: crate::grassmann::GrassmannAlgebra) -> AutomorphismData {
        let g = env.lie();
        let rows: Vec<Vector> = (0..g.dim()).map(|i| g.basis_vector(i)).collect();
        AutomorphismData::from_matrix(env, alg, &rows).expect("identity is parity preserving")
    }

    pub fn images(&self) -> &[LieSuperElementA] {
        &self.images
    }

    /// Applies the map monomial by monomial: `a ⊗ z_1 ... z_k -> a · φ(z_1) ... φ(z_k)`.
    pub fn apply(&self, u: &UEnvElement) -> Result<UEnvElement> {
        let alg = u.algebra();
        if let Some(img) = self.images.first() {
            if img.algebra() != alg {
                return Err(Error::AlgebraMismatch("automorphism and element over different Grassmann algebras".into()));
            }
        }
        let lifted: Vec<UEnvElement> = self.images.iter().map(|x| UEnvElement::from_lie(&self.env, x)).collect();
        let mut out = UEnvElement::zero(&self.env, alg);
        for (m, a) in u.terms() {
            let mut acc = UEnvElement::scalar(&self.env, a.clone());
            for l in m.letters() {
                acc = acc.checked_mul(&lifted[l])?;
            }
            out = out.checked_add(&acc)?;
        }
        Ok(out)
    }
}

//! Finite-dimensional Lie superalgebras given by structure constants and a 2-operation table.
//!
//! Basis vectors are indexed globally: even vectors `0..m`, odd vectors `m..m+n`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grassmann::{GrassmannAlgebra, GrassmannElement};
use crate::linalg::{axpy, is_zero_vector, zero_vector, Vector};
use crate::parity::Parity;
use crate::poly::ScalarSpec;
use crate::report::Report;
use crate::scalar::{is_negative, Field, Scalar};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieSuperAlgebra {
    field: Field,
    even_names: Vec<String>,
    odd_names: Vec<String>,
    /// `bracket[i * dim + j]` holds the coordinates of `[z_i, z_j]`.
    bracket: Vec<Vector>,
    /// Square of each odd basis vector under the 2-operation, in even coordinates.
    two_op: Vec<Vector>,
}

pub const SUITE: &str = "lie";

impl LieSuperAlgebra {
    /// The abelian superalgebra on the given bases (zero bracket, zero 2-operation).
    pub fn new(field: Field, even_names: Vec<String>, odd_names: Vec<String>) -> LieSuperAlgebra {
        let d = even_names.len() + odd_names.len();
        let m = even_names.len();
        let n = odd_names.len();
        LieSuperAlgebra {
            field,
            even_names,
            odd_names,
            bracket: vec![zero_vector(field, d); d * d],
            two_op: vec![zero_vector(field, m); n],
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.even_names.len() + self.odd_names.len()
    }

    pub fn even_dim(&self) -> usize {
        self.even_names.len()
    }

    pub fn odd_dim(&self) -> usize {
        self.odd_names.len()
    }

    pub fn even_names(&self) -> &[String] {
        &self.even_names
    }

    pub fn odd_names(&self) -> &[String] {
        &self.odd_names
    }

    pub fn name(&self, i: usize) -> &str {
        let m = self.even_dim();
        if i < m {
            &self.even_names[i]
        } else {
            &self.odd_names[i - m]
        }
    }

    pub fn parity(&self, i: usize) -> Parity {
        if i < self.even_dim() {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// Global index of the `k`-th odd basis vector.
    pub fn odd_index(&self, k: usize) -> usize {
        self.even_dim() + k
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> &Vector {
        &self.bracket[i * self.dim() + j]
    }

    /// Overwrites a single structure constant `[z_i, z_j]_k`.
    pub fn set_constant(&mut self, i: usize, j: usize, k: usize, c: Scalar) {
        let d = self.dim();
        self.bracket[i * d + j][k] = c;
    }

    /// Sets `[z_i, z_j]` exactly as given, without touching `[z_j, z_i]`.
    pub fn set_bracket_raw(&mut self, i: usize, j: usize, v: Vector) {
        let d = self.dim();
        self.bracket[i * d + j] = v;
    }

    /// Sets `[z_i, z_j] = v` and `[z_j, z_i]` by super-antisymmetry.
    pub fn set_bracket(&mut self, i: usize, j: usize, v: Vector) {
        let swap_sign = self.parity(i).koszul(self.parity(j));
        let other: Vector = v.iter().map(|x| if swap_sign { x.clone() } else { -x }).collect();
        self.set_bracket_raw(i, j, v);
        self.set_bracket_raw(j, i, other);
    }

    /// The 2-operation value on the `k`-th odd basis vector (even coordinates).
    pub fn two_op_basis(&self, k: usize) -> &Vector {
        &self.two_op[k]
    }

    pub fn set_two_op(&mut self, k: usize, v: Vector) {
        self.two_op[k] = v;
    }

    pub fn set_two_op_constant(&mut self, k: usize, e: usize, c: Scalar) {
        self.two_op[k][e] = c;
    }

    /// Replaces the 2-operation table by half the self-bracket of each odd basis vector.
    pub fn with_half_bracket_two_op(mut self) -> LieSuperAlgebra {
        self.two_op = two_op_half_bracket(&self);
        self
    }

    /// Bilinear bracket of coordinate vectors over the ground field.
    pub fn bracket(&self, x: &[Scalar], y: &[Scalar]) -> Vector {
        let d = self.dim();
        let mut out = zero_vector(self.field, d);
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                axpy(&mut out, &(a * b), &self.bracket[i * d + j]);
            }
        }
        out
    }

    /// Embeds even coordinates (length `m`) into a full coordinate vector.
    pub fn embed_even(&self, x: &[Scalar]) -> Vector {
        let mut v = zero_vector(self.field, self.dim());
        v[..x.len()].clone_from_slice(x);
        v
    }

    pub fn basis_vector(&self, i: usize) -> Vector {
        crate::linalg::unit_vector(self.field, self.dim(), i)
    }

    /// The 2-operation on an odd vector, given as full coordinates with zero even part:
    /// `sum c_i^2 v_i^<2> + sum_{i<j} c_i c_j [v_i, v_j]`.
    pub fn two_op_of(&self, v: &[Scalar]) -> Vector {
        let m = self.even_dim();
        let d = self.dim();
        let mut out = zero_vector(self.field, d);
        for i in m..d {
            if v[i].is_zero() {
                continue;
            }
            let sq = &v[i] * &v[i];
            for (e, x) in self.two_op[i - m].iter().enumerate() {
                if !x.is_zero() {
                    out[e] += &(&sq * x);
                }
            }
            for j in i + 1..d {
                if !v[j].is_zero() {
                    axpy(&mut out, &(&v[i] * &v[j]), &self.bracket[i * d + j]);
                }
            }
        }
        out
    }

    /// Negates the bracket on pairs of odd vectors and negates the 2-operation.
    pub fn sigma_deform(&self) -> LieSuperAlgebra {
        let mut out = self.clone();
        let m = self.even_dim();
        let d = self.dim();
        for i in m..d {
            for j in m..d {
                out.bracket[i * d + j] = self.bracket[i * d + j].iter().map(|x| -x).collect();
            }
        }
        for t in out.two_op.iter_mut() {
            for x in t.iter_mut() {
                *x = -&*x;
            }
        }
        out
    }

    pub fn is_abelian(&self) -> bool {
        self.bracket.iter().all(|v| is_zero_vector(v)) && self.two_op.iter().all(|v| is_zero_vector(v))
    }

    /// Human-readable linear combination of basis names.
    pub fn format_vector(&self, v: &[Scalar]) -> String {
        format_combination(v, |i| self.name(i).to_string())
    }

    /// Evaluates every axiom on the structure tables and lists violations.
    pub fn check_axioms(&self) -> Report {
        let mut r = Report::new();
        let d = self.dim();
        let m = self.even_dim();
        let f = self.field;
        let e = |i: usize| self.basis_vector(i);

        for i in 0..d {
            for j in 0..d {
                let target = self.parity(i) + self.parity(j);
                let v = self.bracket_basis(i, j);
                let ok = (0..d).all(|k| self.parity(k) == target || v[k].is_zero());
                r.record(SUITE, "parity", ok, || format!("[{}, {}] has wrong parity", self.name(i), self.name(j)));
            }
        }

        for i in 0..m {
            for j in i..m {
                let x = crate::linalg::add_vectors(&e(i), &e(j));
                let ok = is_zero_vector(&self.bracket(&x, &x));
                r.record(SUITE, "even-self-bracket", ok, || {
                    format!("[u, u] != 0 for u = {}", self.format_vector(&x))
                });
            }
        }

        for i in 0..d {
            for j in 0..d {
                let sign = sign_of(f, self.parity(i).koszul(self.parity(j)));
                let lhs = self.bracket_basis(i, j);
                let rhs = self.bracket_basis(j, i);
                let ok = lhs.iter().zip(rhs).all(|(a, b)| (a + &(&sign * b)).is_zero());
                r.record(SUITE, "super-antisymmetry", ok, || {
                    format!("[{0}, {1}] and [{1}, {0}] are not super-antisymmetric", self.name(i), self.name(j))
                });
            }
        }

        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let (pi, pj, pk) = (self.parity(i), self.parity(j), self.parity(k));
                    let t1 = self.bracket(self.bracket_basis(i, j), &e(k));
                    let t2 = self.bracket(self.bracket_basis(j, k), &e(i));
                    let t3 = self.bracket(self.bracket_basis(k, i), &e(j));
                    let s2 = sign_of(f, pi.koszul(pj + pk));
                    let s3 = sign_of(f, pk.koszul(pi + pj));
                    let mut sum = t1;
                    axpy(&mut sum, &s2, &t2);
                    axpy(&mut sum, &s3, &t3);
                    r.record(SUITE, "super-jacobi", is_zero_vector(&sum), || {
                        format!("Jacobi fails on ({}, {}, {})", self.name(i), self.name(j), self.name(k))
                    });
                }
            }
        }

        // [[v,v],v] = 0 for all odd v: every coefficient of the cubic form vanishes.
        for i in m..d {
            for j in i..d {
                for k in j..d {
                    let mut orders = vec![[i, j, k], [i, k, j], [j, i, k], [j, k, i], [k, i, j], [k, j, i]];
                    orders.sort();
                    orders.dedup();
                    let mut sum = zero_vector(f, d);
                    for [a, b, c] in orders {
                        let t = self.bracket(self.bracket_basis(a, b), &e(c));
                        axpy(&mut sum, &f.one(), &t);
                    }
                    r.record(SUITE, "odd-cube", is_zero_vector(&sum), || {
                        format!("[[v,v],v] coefficient nonzero for ({}, {}, {})", self.name(i), self.name(j), self.name(k))
                    });
                }
            }
        }

        r.merge(self.square_homogeneity(|v| self.two_op_of(v)));
        for i in m..d {
            for j in i..d {
                let v = crate::linalg::add_vectors(&e(i), &e(j));
                // (v_i + v_j)^<2> = v_i^<2> + [v_i, v_j] + v_j^<2>, including i = j
                let lhs = self.two_op_of(&v);
                let mut rhs = self.embed_even(&self.two_op[i - m]);
                axpy(&mut rhs, &f.one(), &self.embed_even(&self.two_op[j - m]));
                axpy(&mut rhs, &f.one(), self.bracket_basis(i, j));
                r.record(SUITE, "square-additivity", lhs == rhs, || {
                    format!("(v + w)^<2> rule fails for v = {}, w = {}", self.name(i), self.name(j))
                });
                // [v^<2>, z] = [v, [v, z]]
                let vv = if i == j { e(i) } else { v.clone() };
                let sq = self.two_op_of(&vv);
                for k in 0..d {
                    let lhs = self.bracket(&sq, &e(k));
                    let rhs = self.bracket(&vv, &self.bracket(&vv, &e(k)));
                    r.record(SUITE, "square-adjoint", lhs == rhs, || {
                        format!("[v^<2>, {}] != [v, [v, {}]] for v = {}", self.name(k), self.name(k), self.format_vector(&vv))
                    });
                }
            }
        }
        for cond in ["square-homogeneity", "square-additivity", "square-adjoint", "odd-cube", "even-self-bracket"] {
            r.touch(SUITE, cond);
        }
        r
    }
}

impl LieSuperAlgebra {
    /// `(c v)^<2> = c^2 v^<2>` for a candidate 2-operation on full coordinate vectors, tested on
    /// sums of pairs of odd basis vectors. [`LieSuperAlgebra::two_op_of`] extends basis values
    /// quadratically and always passes; other candidates can be supplied to probe the check.
    pub fn square_homogeneity(&self, two_op: impl Fn(&[Scalar]) -> Vector) -> Report {
        let mut r = Report::new();
        let (m, d, f) = (self.even_dim(), self.dim(), self.field);
        let scalars = [f.from_i64(2), f.from_i64(-1), f.from_i64(3)];
        for i in m..d {
            for j in i..d {
                let v = crate::linalg::add_vectors(&self.basis_vector(i), &self.basis_vector(j));
                for lam in &scalars {
                    let lhs = two_op(&crate::linalg::scale_vector(lam, &v));
                    let rhs = crate::linalg::scale_vector(&(lam * lam), &two_op(&v));
                    r.record(SUITE, "square-homogeneity", lhs == rhs, || {
                        format!("(c v)^<2> != c^2 v^<2> for c = {lam}, v = {}", self.format_vector(&v))
                    });
                }
            }
        }
        r.touch(SUITE, "square-homogeneity");
        r
    }
}

fn sign_of(f: Field, negative: bool) -> Scalar {
    crate::scalar::sign(f, negative)
}

/// Formats `sum v_i * name(i)`.
pub fn format_combination(v: &[Scalar], name: impl Fn(usize) -> String) -> String {
    let mut s = String::new();
    for (i, c) in v.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let neg = is_negative(c);
        let mag = if neg { -c } else { c.clone() };
        if s.is_empty() {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        if mag.is_one() {
            s.push_str(&name(i));
        } else {
            s.push_str(&format!("{mag}*{}", name(i)));
        }
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

/// The table `v_i -> (1/2)[v_i, v_i]` (even coordinates).
pub fn two_op_half_bracket(g: &LieSuperAlgebra) -> Vec<Vector> {
    let m = g.even_dim();
    let half = g.field.from_i64(2).inv().expect("odd characteristic");
    (0..g.odd_dim())
        .map(|k| {
            let i = g.odd_index(k);
            g.bracket_basis(i, i)[..m].iter().map(|x| x * &half).collect()
        })
        .collect()
}

/// An element of `A ⊗ g`: one Grassmann coefficient per basis vector, written `sum a_i ⊗ z_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LieSuperElementA {
    alg: GrassmannAlgebra,
    coeffs: Vec<GrassmannElement>,
}

impl LieSuperElementA {
    pub fn zero(alg: GrassmannAlgebra, dim: usize) -> LieSuperElementA {
        LieSuperElementA { alg, coeffs: vec![alg.zero(); dim] }
    }

    pub fn from_coeffs(alg: GrassmannAlgebra, coeffs: Vec<GrassmannElement>) -> Result<LieSuperElementA> {
        if coeffs.iter().any(|c| c.algebra() != alg) {
            return Err(Error::AlgebraMismatch("coefficient from another Grassmann algebra".into()));
        }
        Ok(LieSuperElementA { alg, coeffs })
    }

    /// `a ⊗ z_i`.
    pub fn basis(alg: GrassmannAlgebra, dim: usize, i: usize, a: GrassmannElement) -> LieSuperElementA {
        let mut x = LieSuperElementA::zero(alg, dim);
        x.coeffs[i] = a;
        x
    }

    /// `1 ⊗ v` for a coordinate vector over the ground field.
    pub fn from_vector(alg: GrassmannAlgebra, v: &[Scalar]) -> LieSuperElementA {
        LieSuperElementA { alg, coeffs: v.iter().map(|c| alg.constant(c.clone())).collect() }
    }

    pub fn algebra(&self) -> GrassmannAlgebra {
        self.alg
    }

    pub fn coeffs(&self) -> &[GrassmannElement] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &GrassmannElement {
        &self.coeffs[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(GrassmannElement::is_zero)
    }

    pub fn add(&self, o: &LieSuperElementA) -> LieSuperElementA {
        LieSuperElementA {
            alg: self.alg,
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a.add(b)).collect(),
        }
    }

    /// Left multiplication by a scalar from `A`.
    pub fn scale(&self, a: &GrassmannElement) -> LieSuperElementA {
        LieSuperElementA { alg: self.alg, coeffs: self.coeffs.iter().map(|c| a.mul(c)).collect() }
    }

    /// Parity of `sum a_i ⊗ z_i` if homogeneous, given the parities of the basis.
    pub fn total_parity(&self, g: &LieSuperAlgebra) -> Option<Parity> {
        let mut seen: Option<Parity> = None;
        for (i, c) in self.coeffs.iter().enumerate() {
            for (mask, _) in c.terms() {
                let p = Parity::from_bit(mask.count_ones()) + g.parity(i);
                match seen {
                    None => seen = Some(p),
                    Some(q) if q != p => return None,
                    _ => {}
                }
            }
        }
        Some(seen.unwrap_or(Parity::Even))
    }

    /// The `A`-bilinear bracket: `[a ⊗ z, b ⊗ w] = (-1)^{|z||b|} ab ⊗ [z, w]`.
    pub fn bracket(&self, o: &LieSuperElementA, g: &LieSuperAlgebra) -> Result<LieSuperElementA> {
        if self.alg != o.alg {
            return Err(Error::AlgebraMismatch("Lie elements over different Grassmann algebras".into()));
        }
        let d = g.dim();
        let mut out = LieSuperElementA::zero(self.alg, d);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let b_signed = if g.parity(i).is_odd() { b.even_part().sub(&b.odd_part()) } else { b.clone() };
                let ab = a.mul(&b_signed);
                for (k, c) in g.bracket_basis(i, j).iter().enumerate() {
                    if !c.is_zero() {
                        out.coeffs[k] = out.coeffs[k].add(&ab.scale(c));
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn format(&self, g: &LieSuperAlgebra) -> String {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| format!("({c})⊗{}", g.name(i)))
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

/// Extends the 2-operation to `u = sum c_i ⊗ v_i` in the odd part of `A ⊗ g` with coefficients
/// of a single parity: `sum c_i^2 ⊗ v_i^<2> + sum_{i<j} c_i c_j ⊗ [v_i, v_j]`, read off from the
/// collected coordinates of `u`.
pub fn base_extend_two_op(g: &LieSuperAlgebra, u: &LieSuperElementA) -> Result<LieSuperElementA> {
    let m = g.even_dim();
    let d = g.dim();
    if u.coeffs.len() != d {
        return Err(Error::Dimension(format!("{} coefficients for a {d}-dimensional algebra", u.coeffs.len())));
    }
    if u.coeffs[..m].iter().any(|c| !c.is_zero()) {
        return Err(Error::Parity("2-operation needs an element of the odd part".into()));
    }
    let all_even = u.coeffs.iter().all(GrassmannElement::is_even);
    let all_odd = u.coeffs.iter().all(GrassmannElement::is_odd);
    if !all_even && !all_odd {
        return Err(Error::Parity("coefficients must share a single parity".into()));
    }
    let mut out = LieSuperElementA::zero(u.alg, d);
    for i in m..d {
        let ci = &u.coeffs[i];
        if ci.is_zero() {
            continue;
        }
        let sq = ci.mul(ci);
        if !sq.is_zero() {
            for (e, x) in g.two_op_basis(i - m).iter().enumerate() {
                if !x.is_zero() {
                    out.coeffs[e] = out.coeffs[e].add(&sq.scale(x));
                }
            }
        }
        for j in i + 1..d {
            let cc = ci.mul(&u.coeffs[j]);
            if cc.is_zero() {
                continue;
            }
            for (k, x) in g.bracket_basis(i, j).iter().enumerate() {
                if !x.is_zero() {
                    out.coeffs[k] = out.coeffs[k].add(&cc.scale(x));
                }
            }
        }
    }
    Ok(out)
}

/// JSON block describing a Lie superalgebra by sparse tables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LieSpec {
    pub even: Vec<String>,
    pub odd: Vec<String>,
    /// Entries `[i, j, k, c]` meaning `[z_i, z_j]` has coefficient `c` on `z_k`. A pair `(j, i)`
    /// with no entries of its own is filled in by super-antisymmetry.
    #[serde(default)]
    pub brackets: Vec<(usize, usize, usize, ScalarSpec)>,
    /// Entries `[i, k, c]`: the 2-operation of odd basis vector `z_i` has coefficient `c` on the
    /// even vector `z_k`. When absent, half the self-bracket is used.
    #[serde(default)]
    pub two_op: Option<Vec<(usize, usize, ScalarSpec)>>,
}

impl LieSpec {
    pub fn build(&self, field: Field) -> Result<LieSuperAlgebra> {
        let mut g = LieSuperAlgebra::new(field, self.even.clone(), self.odd.clone());
        let d = g.dim();
        let m = g.even_dim();
        let mut given = std::collections::BTreeSet::new();
        for (i, j, k, c) in &self.brackets {
            if *i >= d || *j >= d || *k >= d {
                return Err(Error::Parse(format!("bracket index out of range in [{i}, {j}, {k}]")));
            }
            given.insert((*i, *j));
            let v = g.bracket_basis(*i, *j)[*k].clone() + c.to_scalar(field)?;
            g.set_constant(*i, *j, *k, v);
        }
        for &(i, j) in &given {
            if !given.contains(&(j, i)) {
                let v = g.bracket_basis(i, j).clone();
                g.set_bracket(i, j, v);
            }
        }
        match &self.two_op {
            None => g = g.with_half_bracket_two_op(),
            Some(entries) => {
                for (i, k, c) in entries {
                    if *i < m || *i >= d || *k >= m {
                        return Err(Error::Parse(format!("2-operation entry [{i}, {k}] out of range")));
                    }
                    let v = g.two_op_basis(i - m)[*k].clone() + c.to_scalar(field)?;
                    g.set_two_op_constant(i - m, *k, v);
                }
            }
        }
        Ok(g)
    }

    pub fn from_algebra(g: &LieSuperAlgebra) -> LieSpec {
        let d = g.dim();
        let m = g.even_dim();
        let mut brackets = Vec::new();
        for i in 0..d {
            for j in 0..d {
                for (k, c) in g.bracket_basis(i, j).iter().enumerate() {
                    if !c.is_zero() {
                        brackets.push((i, j, k, ScalarSpec::from_scalar(c)));
                    }
                }
            }
        }
        let mut two = Vec::new();
        for i in m..d {
            for (k, c) in g.two_op_basis(i - m).iter().enumerate() {
                if !c.is_zero() {
                    two.push((i, k, ScalarSpec::from_scalar(c)));
                }
            }
        }
        LieSpec { even: g.even_names.clone(), odd: g.odd_names.clone(), brackets, two_op: Some(two) }
    }
}

/// Convenience: build `A ⊗ g` elements from Grassmann text for each basis coefficient.
pub fn parse_element(alg: GrassmannAlgebra, coeffs: &[&str]) -> Result<LieSuperElementA> {
    let c = coeffs.iter().map(|t| alg.parse(t)).collect::<Result<Vec<_>>>()?;
    LieSuperElementA::from_coeffs(alg, c)
}

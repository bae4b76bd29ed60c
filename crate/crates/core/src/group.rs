//! Affine matrix groups described by polynomial equations in the entries `g_ij` and an extra
//! variable `d` with `d · det(g) = 1`, their points over even Grassmann algebras, Lie algebras,
//! distributions, and actions on a Lie superalgebra.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use parking_lot::RwLock;

use crate::env::{PbwMonomial, UEnvElement};
use crate::error::{Error, Result};
use crate::grassmann::{GrassmannAlgebra, GrassmannElement};
use crate::liesuper::{LieSuperAlgebra, LieSuperElementA};
use crate::linalg::{self, Matrix, Vector};
use crate::poly::{group_variable_names, Polynomial};
use crate::report::Report;
use crate::scalar::{Field, Scalar};

pub const SUITE: &str = "group";

/// Square matrix with entries in an even Grassmann subalgebra.
pub type AMatrix = Vec<Vec<GrassmannElement>>;

pub fn amat_identity(alg: GrassmannAlgebra, n: usize) -> AMatrix {
    (0..n).map(|i| (0..n).map(|j| if i == j { alg.one() } else { alg.zero() }).collect()).collect()
}

pub fn amat_mul(a: &AMatrix, b: &AMatrix) -> AMatrix {
    let n = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..n)
                .map(|j| {
                    let mut acc = row.first().map(|x| x.algebra().zero()).unwrap_or_else(|| b[0][0].algebra().zero());
                    for (k, x) in row.iter().enumerate() {
                        if !x.is_zero() && !b[k][j].is_zero() {
                            acc = acc.add(&x.mul(&b[k][j]));
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn amat_from_scalars(alg: GrassmannAlgebra, m: &Matrix) -> AMatrix {
    m.iter().map(|r| r.iter().map(|c| alg.constant(c.clone())).collect()).collect()
}

pub fn amat_scale(m: &AMatrix, c: &GrassmannElement) -> AMatrix {
    m.iter().map(|r| r.iter().map(|x| x.mul(c)).collect()).collect()
}

pub fn amat_add(a: &AMatrix, b: &AMatrix) -> AMatrix {
    a.iter().zip(b).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x.add(y)).collect()).collect()
}

/// All permutations of `0..n`, each with a flag that is true for odd permutations.
fn permutations(n: usize) -> Vec<(Vec<usize>, bool)> {
    if n == 0 {
        return vec![(vec![], false)];
    }
    let mut out = Vec::new();
    for (p, s) in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            // inserting the largest element at `pos` adds (len - pos) inversions
            out.push((q, s ^ ((p.len() - pos) % 2 == 1)));
        }
    }
    out
}

/// Determinant of a matrix over a commutative ring given by `mul`, `add`, `neg` closures.
fn generic_det<T: Clone>(m: &[Vec<T>], one: T, zero: T, mul: impl Fn(&T, &T) -> T, add: impl Fn(&T, &T) -> T, neg: impl Fn(&T) -> T) -> T {
    let n = m.len();
    let mut acc = zero;
    for (p, odd) in permutations(n) {
        let mut term = one.clone();
        for (i, &j) in p.iter().enumerate() {
            term = mul(&term, &m[i][j]);
        }
        acc = if odd { add(&acc, &neg(&term)) } else { add(&acc, &term) };
    }
    acc
}

pub fn amat_det(alg: GrassmannAlgebra, m: &AMatrix) -> GrassmannElement {
    generic_det(m, alg.one(), alg.zero(), |a, b| a.mul(b), |a, b| a.add(b), |a| a.neg())
}

fn minor<T: Clone>(m: &[Vec<T>], skip_row: usize, skip_col: usize) -> Vec<Vec<T>> {
    m.iter()
        .enumerate()
        .filter(|(i, _)| *i != skip_row)
        .map(|(_, r)| r.iter().enumerate().filter(|(j, _)| *j != skip_col).map(|(_, x)| x.clone()).collect())
        .collect()
}

pub fn amat_adjugate(alg: GrassmannAlgebra, m: &AMatrix) -> AMatrix {
    let n = m.len();
    let mut out = amat_identity(alg, n);
    for i in 0..n {
        for j in 0..n {
            let c = amat_det(alg, &minor(m, j, i));
            out[i][j] = if (i + j) % 2 == 1 { c.neg() } else { c };
        }
    }
    out
}

fn poly_det(field: Field, nvars: usize, m: &[Vec<Polynomial>]) -> Polynomial {
    generic_det(
        m,
        Polynomial::one(field, nvars),
        Polynomial::zero(field, nvars),
        |a, b| a.mul(b),
        |a, b| a.add(b),
        |a| a.neg(),
    )
}

/// A point of `G` with entries in the even part of a Grassmann algebra.
#[derive(Clone, PartialEq, Eq)]
pub struct GroupPoint {
    alg: GrassmannAlgebra,
    matrix: AMatrix,
    det_inv: GrassmannElement,
}

impl fmt::Debug for GroupPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupPoint({self})")
    }
}

impl fmt::Display for GroupPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .matrix
            .iter()
            .map(|r| format!("[{}]", r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")))
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

impl GroupPoint {
    pub fn algebra(&self) -> GrassmannAlgebra {
        self.alg
    }

    pub fn matrix(&self) -> &AMatrix {
        &self.matrix
    }

    pub fn size(&self) -> usize {
        self.matrix.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &GrassmannElement {
        &self.matrix[i][j]
    }

    pub fn det_inv(&self) -> &GrassmannElement {
        &self.det_inv
    }

    /// Values of the coordinate functions `g11, ..., gmm, d`.
    pub fn values(&self) -> Vec<GrassmannElement> {
        let mut v: Vec<GrassmannElement> = self.matrix.iter().flatten().cloned().collect();
        v.push(self.det_inv.clone());
        v
    }

    pub fn is_identity(&self) -> bool {
        self.matrix.iter().enumerate().all(|(i, r)| {
            r.iter().enumerate().all(|(j, x)| if i == j { x.is_one() } else { x.is_zero() })
        })
    }

    /// The same point viewed over a larger Grassmann algebra.
    pub fn embed(&self, target: GrassmannAlgebra) -> Result<GroupPoint> {
        let matrix = self
            .matrix
            .iter()
            .map(|r| r.iter().map(|x| x.embed(target)).collect::<Result<Vec<_>>>())
            .collect::<Result<AMatrix>>()?;
        Ok(GroupPoint { alg: target, matrix, det_inv: self.det_inv.embed(target)? })
    }

    /// Builds a point from a matrix with invertible determinant, without checking equations.
    pub fn from_matrix_unchecked(alg: GrassmannAlgebra, matrix: AMatrix) -> Result<GroupPoint> {
        let det = amat_det(alg, &matrix);
        let det_inv = det
            .inverse()
            .map_err(|_| Error::NotInvertible(format!("matrix with determinant {det} is not invertible")))?;
        Ok(GroupPoint { alg, matrix, det_inv })
    }

    /// Product `self · o` without a membership check.
    pub fn mul_unchecked(&self, o: &GroupPoint) -> GroupPoint {
        GroupPoint {
            alg: self.alg,
            matrix: amat_mul(&self.matrix, &o.matrix),
            det_inv: self.det_inv.mul(&o.det_inv),
        }
    }

    /// `d · adj(g)`, whose own `d`-value is `det g`.
    pub fn inverse_unchecked(&self) -> GroupPoint {
        let adj = amat_adjugate(self.alg, &self.matrix);
        GroupPoint {
            alg: self.alg,
            matrix: amat_scale(&adj, &self.det_inv),
            det_inv: amat_det(self.alg, &self.matrix),
        }
    }
}

/// A closed subgroup of `GL_m` given by polynomial equations in `g11..gmm, d`.
/// Pairings of PBW monomials with the coordinate functions, computed once per monomial.
type MonomialCache = HashMap<PbwMonomial, Arc<(Matrix, Scalar)>>;

#[derive(Clone)]
pub struct MatrixGroup {
    field: Field,
    size: usize,
    equations: Vec<Polynomial>,
    lie_basis: Vec<Matrix>,
    monomial_cache: Arc<RwLock<MonomialCache>>,
}

impl fmt::Debug for MatrixGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = group_variable_names(self.size);
        let eqs: Vec<String> = self.equations.iter().map(|e| e.display_with(&names).to_string()).collect();
        f.debug_struct("MatrixGroup").field("size", &self.size).field("equations", &eqs).finish()
    }
}

impl MatrixGroup {
    /// `lie_basis = None` uses the computed Lie algebra; a given basis must span exactly it.
    pub fn new(field: Field, size: usize, equations: Vec<Polynomial>, lie_basis: Option<Vec<Matrix>>) -> Result<MatrixGroup> {
        let nvars = size * size + 1;
        if size == 0 {
            return Err(Error::Dimension("matrix groups need size at least 1".into()));
        }
        if let Some(e) = equations.iter().find(|e| e.nvars() != nvars || e.field() != field) {
            return Err(Error::Dimension(format!("equation over {} variables, expected {nvars}", e.nvars())));
        }
        let mut g = MatrixGroup {
            field,
            size,
            equations,
            lie_basis: Vec::new(),
            monomial_cache: Arc::new(RwLock::new(HashMap::new())),
        };
        let id = g.identity(GrassmannAlgebra::new(0, field)?);
        if !g.contains(&id)? {
            return Err(Error::Precondition("the identity matrix violates the group equations".into()));
        }
        let computed = g.lie_algebra_of();
        g.lie_basis = match lie_basis {
            None => computed,
            Some(basis) => {
                let flat: Matrix = basis.iter().map(|x| flatten(x, size)).collect::<Result<_>>()?;
                let comp: Matrix = computed.iter().map(|x| flatten(x, size).expect("square")).collect();
                if linalg::rank(&flat, size * size) != basis.len() || basis.len() != comp.len() {
                    return Err(Error::Precondition("the given Lie basis is not a basis of Lie(G)".into()));
                }
                if flat.iter().any(|r| !linalg::in_span(field, &comp, r)) {
                    return Err(Error::Precondition("a given Lie basis matrix is not tangent to G".into()));
                }
                basis
            }
        };
        Ok(g)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn nvars(&self) -> usize {
        self.size * self.size + 1
    }

    pub fn equations(&self) -> &[Polynomial] {
        &self.equations
    }

    pub fn lie_basis(&self) -> &[Matrix] {
        &self.lie_basis
    }

    pub fn lie_dim(&self) -> usize {
        self.lie_basis.len()
    }

    pub fn variable_names(&self) -> Vec<String> {
        group_variable_names(self.size)
    }

    /// The coordinate function `g_{ij}` (0-based).
    pub fn coordinate(&self, i: usize, j: usize) -> Polynomial {
        Polynomial::var(self.field, self.nvars(), i * self.size + j)
    }

    /// The coordinate function `d = det^{-1}`.
    pub fn det_inv_function(&self) -> Polynomial {
        Polynomial::var(self.field, self.nvars(), self.size * self.size)
    }

    /// All coordinate functions `g_ij` followed by `d`.
    pub fn coordinate_functions(&self) -> Vec<Polynomial> {
        (0..self.nvars()).map(|k| Polynomial::var(self.field, self.nvars(), k)).collect()
    }

    pub fn identity(&self, alg: GrassmannAlgebra) -> GroupPoint {
        GroupPoint { alg, matrix: amat_identity(alg, self.size), det_inv: alg.one() }
    }

    pub fn eval(&self, c: &Polynomial, p: &GroupPoint) -> Result<GrassmannElement> {
        c.eval(p.alg, &p.values())
    }

    /// Values of the defining equations at `p` (all zero for a point of `G`).
    pub fn residues(&self, p: &GroupPoint) -> Result<Vec<GrassmannElement>> {
        self.equations.iter().map(|e| self.eval(e, p)).collect()
    }

    pub fn contains(&self, p: &GroupPoint) -> Result<bool> {
        if p.size() != self.size {
            return Ok(false);
        }
        if !p.det_inv.mul(&amat_det(p.alg, &p.matrix)).is_one() {
            return Ok(false);
        }
        Ok(self.residues(p)?.iter().all(GrassmannElement::is_zero))
    }

    /// A point from a matrix over `A_0`: entries must be even and the equations must hold.
    pub fn point(&self, alg: GrassmannAlgebra, matrix: AMatrix) -> Result<GroupPoint> {
        if matrix.len() != self.size || matrix.iter().any(|r| r.len() != self.size) {
            return Err(Error::Dimension(format!("expected a {0}x{0} matrix", self.size)));
        }
        if matrix.iter().flatten().any(|x| !x.is_even()) {
            return Err(Error::Parity("group points need even entries".into()));
        }
        let p = GroupPoint::from_matrix_unchecked(alg, matrix)?;
        if !self.contains(&p)? {
            return Err(Error::Precondition(format!("{p} is not a point of the group")));
        }
        Ok(p)
    }

    pub fn point_from_scalars(&self, alg: GrassmannAlgebra, m: &Matrix) -> Result<GroupPoint> {
        self.point(alg, amat_from_scalars(alg, m))
    }

    fn check_member(&self, p: &GroupPoint, what: &str) -> Result<()> {
        if !self.contains(p)? {
            return Err(Error::Precondition(format!("{what}: {p} is not a point of the group")));
        }
        Ok(())
    }

    pub fn mul(&self, p: &GroupPoint, q: &GroupPoint) -> Result<GroupPoint> {
        if p.alg != q.alg {
            return Err(Error::AlgebraMismatch("points over different Grassmann algebras".into()));
        }
        self.check_member(p, "left factor")?;
        self.check_member(q, "right factor")?;
        Ok(p.mul_unchecked(q))
    }

    pub fn inv(&self, p: &GroupPoint) -> Result<GroupPoint> {
        self.check_member(p, "inverse")?;
        Ok(p.inverse_unchecked())
    }

    /// Matrices `X` with `I + tX` satisfying every equation modulo `t^2`.
    pub fn lie_algebra_of(&self) -> Vec<Matrix> {
        let m = self.size;
        let f = self.field;
        let mut id_values = vec![f.zero(); self.nvars()];
        for i in 0..m {
            id_values[i * m + i] = f.one();
        }
        id_values[m * m] = f.one();
        let rows: Matrix = self
            .equations
            .iter()
            .map(|e| {
                let dd = e.derivative(m * m).eval_scalars(&id_values).expect("polynomial at the identity");
                (0..m * m)
                    .map(|k| {
                        let mut c = e.derivative(k).eval_scalars(&id_values).expect("polynomial at the identity");
                        if k / m == k % m {
                            // d = det^{-1} moves by -tr X to first order
                            c -= &dd;
                        }
                        c
                    })
                    .collect()
            })
            .collect();
        let null = linalg::nullspace(f, &rows, m * m);
        null.iter().map(|v| unflatten(v, m)).collect()
    }

    /// Coordinates of a field matrix in the Lie basis, if it lies in `Lie(G)`.
    pub fn lie_coordinates(&self, x: &Matrix) -> Option<Vector> {
        let basis: Matrix = self.lie_basis.iter().map(|b| flatten(b, self.size).ok()).collect::<Option<_>>()?;
        linalg::coordinates(self.field, &basis, &flatten(x, self.size).ok()?)
    }

    /// `Σ c_k X_k` for Lie coordinates `c`.
    pub fn lie_matrix(&self, coords: &[Scalar]) -> Matrix {
        let m = self.size;
        let mut out = vec![vec![self.field.zero(); m]; m];
        for (c, x) in coords.iter().zip(&self.lie_basis) {
            if c.is_zero() {
                continue;
            }
            for i in 0..m {
                for j in 0..m {
                    out[i][j] += &(c * &x[i][j]);
                }
            }
        }
        out
    }

    /// `Lie(G)` as a purely even Lie superalgebra (matrix commutator in the Lie basis).
    pub fn even_lie_algebra(&self, names: Vec<String>) -> Result<LieSuperAlgebra> {
        let r = self.lie_dim();
        if names.len() != r {
            return Err(Error::Dimension(format!("{} names for a {r}-dimensional Lie algebra", names.len())));
        }
        let mut g = LieSuperAlgebra::new(self.field, names, vec![]);
        for i in 0..r {
            for j in 0..r {
                let c = self.commutator_coordinates(i, j)?;
                g.set_bracket_raw(i, j, c);
            }
        }
        Ok(g)
    }

    /// Coordinates of `[X_i, X_j] = X_i X_j - X_j X_i`.
    pub fn commutator_coordinates(&self, i: usize, j: usize) -> Result<Vector> {
        let (a, b) = (&self.lie_basis[i], &self.lie_basis[j]);
        let m = self.size;
        let ab = linalg::mat_mul(self.field, a, b, m);
        let ba = linalg::mat_mul(self.field, b, a, m);
        let comm: Matrix = ab.iter().zip(&ba).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x - y).collect()).collect();
        self.lie_coordinates(&comm)
            .ok_or_else(|| Error::Axiom("the Lie basis is not closed under the commutator".into()))
    }

    /// Polynomials `P_jk` with `g^{-1} X_j g = Σ_k P_jk(g, d) X_k`.
    pub fn conjugation_rows(&self) -> Result<Vec<Vec<Polynomial>>> {
        let m = self.size;
        let f = self.field;
        let nv = self.nvars();
        let g: Vec<Vec<Polynomial>> = (0..m).map(|i| (0..m).map(|j| self.coordinate(i, j)).collect()).collect();
        let d = self.det_inv_function();
        // g^{-1} = d · adj(g)
        let mut ginv = vec![vec![Polynomial::zero(f, nv); m]; m];
        for i in 0..m {
            for j in 0..m {
                let c = poly_det(f, nv, &minor(&g, j, i));
                let c = if (i + j) % 2 == 1 { c.neg() } else { c };
                ginv[i][j] = d.mul(&c);
            }
        }
        let basis: Matrix = self.lie_basis.iter().map(|b| flatten(b, m)).collect::<Result<_>>()?;
        let r = basis.len();
        let mut echelon = basis.clone();
        let pivots = linalg::rref(&mut echelon, m * m);
        let square: Matrix = basis.iter().map(|row| pivots.iter().map(|&p| row[p].clone()).collect()).collect();
        let solve = if r == 0 { Vec::new() } else { linalg::inverse(f, &square)? };
        let mut rows = Vec::with_capacity(r);
        for x in &self.lie_basis {
            // entries of g^{-1} X g
            let mut conj = vec![vec![Polynomial::zero(f, nv); m]; m];
            for a in 0..m {
                for b in 0..m {
                    let mut acc = Polynomial::zero(f, nv);
                    for k in 0..m {
                        for l in 0..m {
                            if !x[k][l].is_zero() {
                                acc = acc.add(&ginv[a][k].mul(&g[l][b]).scale(&x[k][l]));
                            }
                        }
                    }
                    conj[a][b] = acc;
                }
            }
            let row: Vec<Polynomial> = (0..r)
                .map(|k| {
                    let mut acc = Polynomial::zero(f, nv);
                    for (l, &p) in pivots.iter().enumerate() {
                        acc = acc.add(&conj[p / m][p % m].scale(&solve[l][k]));
                    }
                    acc
                })
                .collect();
            rows.push(row);
        }
        Ok(rows)
    }

    /// `⟨x, c⟩`: the coefficient of `t` in `c(I + tX)`, with `t^2 = 0`.
    pub fn tangent_pairing(&self, x: &Matrix, c: &Polynomial) -> Result<Scalar> {
        let alg = GrassmannAlgebra::new(2, self.field)?;
        let t = alg.generator(0).mul(&alg.generator(1));
        let ax = amat_from_scalars(alg, x);
        let p = GroupPoint::from_matrix_unchecked(alg, amat_add(&amat_identity(alg, self.size), &amat_scale(&ax, &t)))?;
        Ok(self.eval(c, &p)?.coefficient(0b11))
    }

    /// The Leibniz rule `⟨x, c1 c2⟩ = ⟨x, c1⟩ c2(I) + c1(I) ⟨x, c2⟩` for a candidate pairing of
    /// Lie basis elements with functions. The tangent pairing satisfies it by construction;
    /// other candidates can be supplied to probe the check.
    pub fn leibniz_report(&self, functions: &[Polynomial], pairing: impl Fn(&Matrix, &Polynomial) -> Result<Scalar>) -> Report {
        let mut r = Report::new();
        let f = self.field;
        let m = self.size;
        let mut id_vals = vec![f.zero(); self.nvars()];
        for i in 0..m {
            id_vals[i * m + i] = f.one();
        }
        id_vals[m * m] = f.one();
        for x in &self.lie_basis {
            for (a, c1) in functions.iter().enumerate() {
                for (b, c2) in functions.iter().enumerate() {
                    let res = (|| -> Result<bool> {
                        let lhs = pairing(x, &c1.mul(c2))?;
                        let e1 = c1.eval_scalars(&id_vals)?;
                        let e2 = c2.eval_scalars(&id_vals)?;
                        let rhs = &(&pairing(x, c1)? * &e2) + &(&e1 * &pairing(x, c2)?);
                        Ok(lhs == rhs)
                    })();
                    r.record(SUITE, "leibniz", res.unwrap_or(false), || format!("functions {a}, {b}"));
                }
            }
        }
        r.touch(SUITE, "leibniz");
        r
    }

    /// `Π_l (I + t_l X_{k_l})` over the ring with commuting square-zero `t_1, ..., t_r`.
    fn monomial_point(&self, mono: &PbwMonomial) -> Result<(GroupPoint, u64)> {
        let letters = mono.letters();
        let r = letters.len();
        if r > 31 {
            return Err(Error::Unsupported("distribution monomials of degree above 31".into()));
        }
        let alg = GrassmannAlgebra::new(2 * r as u32, self.field)?;
        let mut acc = amat_identity(alg, self.size);
        for (l, &k) in letters.iter().enumerate() {
            let t = alg.generator(2 * l as u32).mul(&alg.generator(2 * l as u32 + 1));
            let step = amat_add(&amat_identity(alg, self.size), &amat_scale(&amat_from_scalars(alg, &self.lie_basis[k]), &t));
            acc = amat_mul(&acc, &step);
        }
        let full = if r == 0 { 0 } else { (1u64 << (2 * r)) - 1 };
        Ok((GroupPoint::from_matrix_unchecked(alg, acc)?, full))
    }

    /// `⟨M, g_ij⟩` for all entries and `⟨M, d⟩`, for a PBW monomial `M` of `U(Lie G)`.
    pub fn monomial_pairings(&self, mono: &PbwMonomial) -> Result<Arc<(Matrix, Scalar)>> {
        if !mono.is_even_part() {
            return Err(Error::Parity("distributions pair only with monomials in even letters".into()));
        }
        if let Some(hit) = self.monomial_cache.read().get(mono) {
            return Ok(hit.clone());
        }
        let (p, full) = self.monomial_point(mono)?;
        let matrix = p.matrix.iter().map(|r| r.iter().map(|x| x.coefficient(full)).collect()).collect();
        let out = Arc::new((matrix, p.det_inv.coefficient(full)));
        self.monomial_cache.write().insert(mono.clone(), out.clone());
        Ok(out)
    }

    /// `⟨u, c⟩` for `u ∈ U(Lie G)` with constant coefficients.
    pub fn distribution_pairing(&self, u: &UEnvElement, c: &Polynomial) -> Result<Scalar> {
        let mut out = self.field.zero();
        for (mono, a) in u.terms() {
            if !mono.is_even_part() {
                return Err(Error::Parity("distribution pairing needs an element of U(g_0)".into()));
            }
            let a = a.as_constant().ok_or_else(|| Error::Precondition("coefficients must be constants".into()))?;
            let (p, full) = self.monomial_point(mono)?;
            out += &(&a * &self.eval(c, &p)?.coefficient(full));
        }
        Ok(out)
    }

    /// `i(f)`: the point with coordinates `⟨f, g_ij⟩` for an even grouplike `f ∈ U(g_0)_{A_0}`.
    pub fn grouplike_to_point(&self, f: &UEnvElement) -> Result<GroupPoint> {
        if !f.in_even_subalgebra() {
            return Err(Error::Parity("grouplike has odd letters".into()));
        }
        if !f.is_grouplike() {
            return Err(Error::Precondition("element is not grouplike".into()));
        }
        self.grouplike_to_point_unchecked(f)
    }

    /// `i(f)` without checking that `f` is grouplike.
    pub fn grouplike_to_point_unchecked(&self, f: &UEnvElement) -> Result<GroupPoint> {
        let alg = f.algebra();
        let m = self.size;
        let mut matrix = vec![vec![alg.zero(); m]; m];
        let mut det_inv = alg.zero();
        for (mono, a) in f.terms() {
            let pair = self.monomial_pairings(mono)?;
            for i in 0..m {
                for j in 0..m {
                    if !pair.0[i][j].is_zero() {
                        matrix[i][j] = matrix[i][j].add(&a.scale(&pair.0[i][j]));
                    }
                }
            }
            det_inv = det_inv.add(&a.scale(&pair.1));
        }
        Ok(GroupPoint { alg, matrix, det_inv })
    }

    /// `I + εX` for an even square-zero `ε` and `X` in the Lie algebra.
    pub fn infinitesimal_point(&self, eps: &GrassmannElement, x: &Matrix) -> Result<GroupPoint> {
        let alg = eps.algebra();
        let m = amat_add(&amat_identity(alg, self.size), &amat_scale(&amat_from_scalars(alg, x), eps));
        self.point(alg, m)
    }
}

fn flatten(x: &Matrix, m: usize) -> Result<Vector> {
    if x.len() != m || x.iter().any(|r| r.len() != m) {
        return Err(Error::Dimension(format!("expected a {m}x{m} matrix")));
    }
    Ok(x.iter().flatten().cloned().collect())
}

fn unflatten(v: &[Scalar], m: usize) -> Matrix {
    v.chunks(m).map(|c| c.to_vec()).collect()
}

/// A matrix group acting on a Lie superalgebra whose even part is `Lie(G)`: basis vector `z_j`
/// goes to `z_j^g = Σ_k P_jk(g) z_k`, with `z^{gh} = (z^g)^h`.
#[derive(Clone, Debug)]
pub struct GroupAction {
    group: MatrixGroup,
    lie: LieSuperAlgebra,
    rows: Vec<Vec<Polynomial>>,
}

impl GroupAction {
    pub fn new(group: MatrixGroup, lie: LieSuperAlgebra, rows: Vec<Vec<Polynomial>>) -> Result<GroupAction> {
        let d = lie.dim();
        if lie.even_dim() != group.lie_dim() {
            return Err(Error::Dimension(format!(
                "even part has dimension {} but Lie(G) has dimension {}",
                lie.even_dim(),
                group.lie_dim()
            )));
        }
        if rows.len() != d || rows.iter().any(|r| r.len() != d) {
            return Err(Error::Dimension(format!("action data must be {d}x{d}")));
        }
        for (j, row) in rows.iter().enumerate() {
            for (k, p) in row.iter().enumerate() {
                if p.nvars() != group.nvars() {
                    return Err(Error::Dimension("action polynomial in the wrong number of variables".into()));
                }
                if !p.is_zero() && lie.parity(j) != lie.parity(k) {
                    return Err(Error::Parity(format!("action sends {} into the other parity", lie.name(j))));
                }
            }
        }
        Ok(GroupAction { group, lie, rows })
    }

    /// Uses the conjugation action `g^{-1} X g` on the even part and `odd_rows` (an
    /// `odd_dim x odd_dim` block of polynomials) on the odd part.
    pub fn from_odd_block(group: MatrixGroup, lie: LieSuperAlgebra, odd_rows: Vec<Vec<Polynomial>>) -> Result<GroupAction> {
        let m = lie.even_dim();
        let n = lie.odd_dim();
        if odd_rows.len() != n || odd_rows.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension(format!("odd action block must be {n}x{n}")));
        }
        let even = group.conjugation_rows()?;
        let zero = Polynomial::zero(group.field(), group.nvars());
        let mut rows = vec![vec![zero; m + n]; m + n];
        for (j, row) in even.into_iter().enumerate() {
            for (k, p) in row.into_iter().enumerate() {
                rows[j][k] = p;
            }
        }
        for (j, row) in odd_rows.into_iter().enumerate() {
            for (k, p) in row.into_iter().enumerate() {
                rows[m + j][m + k] = p;
            }
        }
        GroupAction::new(group, lie, rows)
    }

    pub fn group(&self) -> &MatrixGroup {
        &self.group
    }

    pub fn lie(&self) -> &LieSuperAlgebra {
        &self.lie
    }

    pub fn rows(&self) -> &[Vec<Polynomial>] {
        &self.rows
    }

    /// Returns a copy with one action polynomial replaced (used for sensitivity tests).
    pub fn with_entry(&self, j: usize, k: usize, p: Polynomial) -> GroupAction {
        let mut out = self.clone();
        out.rows[j][k] = p;
        out
    }

    /// `P(g)` as a matrix over `A_0`.
    pub fn action_matrix(&self, p: &GroupPoint) -> Result<AMatrix> {
        let vals = p.values();
        self.rows.iter().map(|r| r.iter().map(|c| c.eval(p.alg, &vals)).collect()).collect()
    }

    /// `z^g` for `z ∈ g_A`.
    pub fn adjoint_apply(&self, p: &GroupPoint, z: &LieSuperElementA) -> Result<LieSuperElementA> {
        if z.algebra() != p.alg {
            return Err(Error::AlgebraMismatch("point and vector over different Grassmann algebras".into()));
        }
        let pm = self.action_matrix(p)?;
        let d = self.lie.dim();
        let mut out = vec![p.alg.zero(); d];
        for (j, a) in z.coeffs().iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for k in 0..d {
                if !pm[j][k].is_zero() {
                    out[k] = out[k].add(&a.mul(&pm[j][k]));
                }
            }
        }
        LieSuperElementA::from_coeffs(p.alg, out)
    }

    /// Checks group-law closure on samples, the composition law of the action, and the
    /// bracket-derivative, Leibniz, and adjoint-compatibility conditions.
    pub fn check_conditions(&self, samples: &[GroupPoint], functions: &[Polynomial]) -> Report {
        let mut r = Report::new();
        let g = &self.group;
        let lie = &self.lie;
        let f = g.field;
        let d = lie.dim();
        let m_even = lie.even_dim();
        // bracket-derivative: [z_j, x_i] = Σ_k ⟨x_i, P_jk⟩ z_k
        for i in 0..m_even {
            let x = &g.lie_basis[i];
            for j in 0..d {
                let mut lhs = Vec::with_capacity(d);
                let mut ok = true;
                for k in 0..d {
                    match g.tangent_pairing(x, &self.rows[j][k]) {
                        Ok(v) => lhs.push(v),
                        Err(_) => {
                            ok = false;
                            lhs.push(f.zero());
                        }
                    }
                }
                let rhs = lie.bracket_basis(j, i);
                r.record(SUITE, "bracket-derivative", ok && &lhs == rhs, || {
                    format!("[{}, {}]: derivative gives {}", lie.name(j), lie.name(i), lie.format_vector(&lhs))
                });
            }
        }
        r.merge(g.leibniz_report(functions, |x, c| g.tangent_pairing(x, c)));
        // action at the identity and composition law
        if let Some(p0) = samples.first() {
            let id = g.identity(p0.alg);
            let ok = self.action_matrix(&id).is_ok_and(|pm| pm == amat_identity(p0.alg, d));
            r.record(SUITE, "action-identity", ok, || "P(I) is not the identity".into());
        }
        for (a, p) in samples.iter().enumerate() {
            r.record(SUITE, "sample-membership", g.contains(p).unwrap_or(false), || format!("sample {a}"));
            for (b, q) in samples.iter().enumerate() {
                let pq = p.mul_unchecked(q);
                r.record(SUITE, "closure", g.contains(&pq).unwrap_or(false), || format!("samples {a}, {b}"));
                let ok = match (self.action_matrix(&pq), self.action_matrix(p), self.action_matrix(q)) {
                    (Ok(x), Ok(y), Ok(z)) => x == amat_mul(&y, &z),
                    _ => false,
                };
                r.record(SUITE, "action-composition", ok, || format!("P(gh) = P(g)P(h) for samples {a}, {b}"));
            }
            let inv = p.inverse_unchecked();
            r.record(SUITE, "inverse", p.mul_unchecked(&inv).is_identity(), || format!("sample {a}"));
        }
        // adjoint-compatibility: ⟨x^g, c⟩ = ⟨x, c(g^{-1} · g)⟩ over the sample's ring
        for (a, p) in samples.iter().enumerate() {
            for i in 0..m_even {
                for (ci, c) in functions.iter().enumerate() {
                    let ok = self.adjoint_compatible(p, i, c).unwrap_or(false);
                    r.record(SUITE, "adjoint-compatibility", ok, || {
                        format!("sample {a}, {} , function {ci}", lie.name(i))
                    });
                }
            }
        }
        r
    }

    fn adjoint_compatible(&self, p: &GroupPoint, i: usize, c: &Polynomial) -> Result<bool> {
        let g = &self.group;
        let n = p.alg.generators();
        let big = GrassmannAlgebra::new(n + 2, g.field)?;
        let block = (1u64 << n) | (1u64 << (n + 1));
        let t = big.monomial(block, g.field.one());
        let pb = p.embed(big)?;
        let pm = self.action_matrix(p)?;
        let m = g.size;
        // X^g = Σ_k P_ik(g) X_k over A_0
        let mut xg = vec![vec![big.zero(); m]; m];
        for (k, xk) in g.lie_basis.iter().enumerate() {
            let coeff = pm[i][k].embed(big)?;
            if coeff.is_zero() {
                continue;
            }
            for a in 0..m {
                for b in 0..m {
                    if !xk[a][b].is_zero() {
                        xg[a][b] = xg[a][b].add(&coeff.scale(&xk[a][b]));
                    }
                }
            }
        }
        let lhs_point = GroupPoint::from_matrix_unchecked(big, amat_add(&amat_identity(big, m), &amat_scale(&xg, &t)))?;
        let lhs = g.eval(c, &lhs_point)?.split_by(block).1;
        let step = amat_add(&amat_identity(big, m), &amat_scale(&amat_from_scalars(big, &g.lie_basis[i]), &t));
        let step = GroupPoint::from_matrix_unchecked(big, step)?;
        let conj = pb.inverse_unchecked().mul_unchecked(&step).mul_unchecked(&pb);
        let rhs = g.eval(c, &conj)?.split_by(block).1;
        Ok(lhs == rhs)
    }

    /// `z^{I + tx} = z + t[z, x]` to first order, for every basis `z` and even basis `x`.
    pub fn first_order_matches_bracket(&self) -> Result<bool> {
        let g = &self.group;
        let alg = GrassmannAlgebra::new(2, g.field)?;
        let t = alg.generator(0).mul(&alg.generator(1));
        for i in 0..self.lie.even_dim() {
            let p = GroupPoint::from_matrix_unchecked(
                alg,
                amat_add(&amat_identity(alg, g.size), &amat_scale(&amat_from_scalars(alg, &g.lie_basis[i]), &t)),
            )?;
            let pm = self.action_matrix(&p)?;
            for j in 0..self.lie.dim() {
                let br = self.lie.bracket_basis(j, i);
                for k in 0..self.lie.dim() {
                    let expected = if j == k { alg.one() } else { alg.zero() }.add(&t.scale(&br[k]));
                    if pm[j][k] != expected {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }
}

#[cfg(test)]
pub(crate) mod tests;

//! Harish-Chandra pairs `(G, V)`: a matrix group, an odd right `G`-module with a symmetric
//! equivariant bracket into `Lie(G)`, their sub-pairs, morphisms, and the pair-level
//! normalizer and centralizer computations.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::grassmann::{GrassmannAlgebra, GrassmannElement};
use crate::group::{amat_mul, GroupAction, GroupPoint, MatrixGroup};
use crate::liesuper::LieSuperAlgebra;
use crate::linalg::{self, Matrix, Vector};
use crate::poly::Polynomial;
use crate::report::Report;
use crate::scalar::{Field, Scalar};

pub const SUITE: &str = "hc-pair";
pub const SUB_SUITE: &str = "sub-pair";
pub const MORPHISM_SUITE: &str = "hc-morphism";

/// A polynomial map from parameter space onto (a dense part of) a subgroup, with explicit
/// `d`-values so Laurent parametrizations such as `diag(s, 1/s)` are allowed.
#[derive(Debug, Clone, PartialEq)]
pub struct Parametrization {
    param_names: Vec<String>,
    entries: Vec<Vec<Polynomial>>,
    det_inv: Polynomial,
}

const SAMPLE_VALUES: [i64; 7] = [2, 3, -1, 5, -2, 7, 4];

impl Parametrization {
    pub fn new(param_names: Vec<String>, entries: Vec<Vec<Polynomial>>, det_inv: Polynomial) -> Result<Parametrization> {
        let p = param_names.len();
        let m = entries.len();
        if m == 0 || entries.iter().any(|r| r.len() != m) {
            return Err(Error::Dimension("parametrization must be a nonempty square matrix".into()));
        }
        if entries.iter().flatten().chain(std::iter::once(&det_inv)).any(|e| e.nvars() != p) {
            return Err(Error::Dimension(format!("parametrization entries must use {p} parameters")));
        }
        Ok(Parametrization { param_names, entries, det_inv })
    }

    pub fn param_names(&self) -> &[String] {
        &self.param_names
    }

    pub fn entries(&self) -> &[Vec<Polynomial>] {
        &self.entries
    }

    pub fn det_inv(&self) -> &Polynomial {
        &self.det_inv
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    /// Images of the group coordinates `g11..gmm, d`, for use with [`Polynomial::compose`].
    pub fn images(&self) -> Vec<Polynomial> {
        self.entries.iter().flatten().cloned().chain(std::iter::once(self.det_inv.clone())).collect()
    }

    /// Pulls a function on the group back to parameter space.
    pub fn pull_back(&self, c: &Polynomial) -> Result<Polynomial> {
        c.compose(&self.images())
    }

    /// The matrix at given parameter values.
    pub fn eval(&self, values: &[Scalar]) -> Result<Matrix> {
        self.entries.iter().map(|r| r.iter().map(|e| e.eval_scalars(values)).collect()).collect()
    }

    /// Deterministic parameter tuples (skipping ones where a Laurent entry is undefined).
    pub fn sample_values(&self, field: Field, count: usize) -> Vec<Vec<Scalar>> {
        let p = self.param_names.len();
        let mut out = Vec::new();
        for s in 0..count + 4 {
            if out.len() == count {
                break;
            }
            let vals: Vec<Scalar> = (0..p).map(|k| field.from_i64(SAMPLE_VALUES[(s + 2 * k) % SAMPLE_VALUES.len()])).collect();
            if self.eval(&vals).is_ok() && self.det_inv.eval_scalars(&vals).is_ok() {
                out.push(vals);
            }
        }
        out
    }
}

/// Collects, for each monomial appearing in any polynomial, the row of its coefficients across
/// the unknowns (`polys[j]` multiplies unknown `j`).
fn coefficient_rows(field: Field, polys: &[Polynomial], rows: &mut Vec<Vector>) {
    let mut by_mono: BTreeMap<Vec<i32>, Vector> = BTreeMap::new();
    for (j, p) in polys.iter().enumerate() {
        for (e, c) in p.terms() {
            by_mono.entry(e.clone()).or_insert_with(|| linalg::zero_vector(field, polys.len()))[j] = c.clone();
        }
    }
    rows.extend(by_mono.into_values());
}

fn poly_scale_sum(field: Field, nvars: usize, terms: impl Iterator<Item = (Polynomial, Scalar)>) -> Polynomial {
    let mut acc = Polynomial::zero(field, nvars);
    for (p, c) in terms {
        if !c.is_zero() {
            acc = acc.add(&p.scale(&c));
        }
    }
    acc
}

fn is_span_subset(field: Field, small: &Matrix, big: &Matrix) -> bool {
    small.iter().all(|v| linalg::in_span(field, big, v))
}

/// A Harish-Chandra pair: group `G`, odd module `V` with coaction rows `c_jk`, and a symmetric
/// bracket `V x V -> Lie(G)` stored in Lie-basis coordinates.
#[derive(Debug, Clone)]
pub struct HCPair {
    group: MatrixGroup,
    even_names: Vec<String>,
    odd_names: Vec<String>,
    rho: Vec<Vec<Polynomial>>,
    bracket: Vec<Vec<Vector>>,
    parametrization: Option<Parametrization>,
    lie: LieSuperAlgebra,
    action: GroupAction,
}

impl HCPair {
    /// Checks shapes and builds the assembled tables; axiom checks are separate (see
    /// [`HCPair::check_all`] and [`HCPair::assemble_lie`]).
    pub fn new(
        group: MatrixGroup,
        even_names: Vec<String>,
        odd_names: Vec<String>,
        rho: Vec<Vec<Polynomial>>,
        bracket: Vec<Vec<Vector>>,
        parametrization: Option<Parametrization>,
    ) -> Result<HCPair> {
        let field = group.field();
        if field.characteristic() == 2 {
            return Err(Error::InvalidField("Harish-Chandra pairs need characteristic other than 2".into()));
        }
        let r = group.lie_dim();
        let n = odd_names.len();
        if even_names.len() != r {
            return Err(Error::Dimension(format!("{} even names for a {r}-dimensional Lie(G)", even_names.len())));
        }
        if rho.len() != n || rho.iter().any(|row| row.len() != n) {
            return Err(Error::Dimension(format!("coaction must be {n}x{n}")));
        }
        if bracket.len() != n || bracket.iter().any(|row| row.len() != n || row.iter().any(|v| v.len() != r)) {
            return Err(Error::Dimension(format!("bracket table must be {n}x{n} vectors of length {r}")));
        }
        if let Some(p) = &parametrization {
            if p.size() != group.size() {
                return Err(Error::Dimension("parametrization has the wrong matrix size".into()));
            }
        }
        let lie = assemble(&group, &even_names, &odd_names, &rho, &bracket)?;
        let action = GroupAction::from_odd_block(group.clone(), lie.clone(), rho.clone())?;
        Ok(HCPair { group, even_names, odd_names, rho, bracket, parametrization, lie, action })
    }

    pub fn group(&self) -> &MatrixGroup {
        &self.group
    }

    pub fn field(&self) -> Field {
        self.group.field()
    }

    pub fn even_names(&self) -> &[String] {
        &self.even_names
    }

    pub fn odd_names(&self) -> &[String] {
        &self.odd_names
    }

    pub fn odd_dim(&self) -> usize {
        self.odd_names.len()
    }

    pub fn lie_dim(&self) -> usize {
        self.group.lie_dim()
    }

    pub fn rho(&self) -> &[Vec<Polynomial>] {
        &self.rho
    }

    pub fn bracket_table(&self) -> &[Vec<Vector>] {
        &self.bracket
    }

    pub fn parametrization(&self) -> Option<&Parametrization> {
        self.parametrization.as_ref()
    }

    /// The assembled superalgebra without validation.
    pub fn lie_unchecked(&self) -> &LieSuperAlgebra {
        &self.lie
    }

    /// The action of `G` on `Lie(G) ⊕ V` (conjugation and the coaction rows).
    pub fn action(&self) -> &GroupAction {
        &self.action
    }

    /// `Lie(G) ⊕ V` with `[v, x] = v ◁ x` and the pair's bracket; fails if any axiom fails.
    pub fn assemble_lie(&self) -> Result<LieSuperAlgebra> {
        let mut r = self.lie.check_axioms();
        r.merge(self.structural_report());
        if !r.is_ok() {
            return Err(Error::Axiom(format!("pair data is inconsistent: {}", r.failing_conditions().join(", "))));
        }
        Ok(self.lie.clone())
    }

    /// `v ◁ x` in `V`-coordinates for `v ∈ V` and `x ∈ Lie(G)` (both as coordinate vectors).
    pub fn triangle(&self, v: &[Scalar], x: &[Scalar]) -> Vector {
        let r = self.lie_dim();
        let mut full_v = linalg::zero_vector(self.field(), r);
        full_v.extend_from_slice(v);
        let full_x = self.lie.embed_even(x);
        self.lie.bracket(&full_v, &full_x)[r..].to_vec()
    }

    /// `[v, w]` in `Lie(G)`-coordinates.
    pub fn odd_bracket(&self, v: &[Scalar], w: &[Scalar]) -> Vector {
        let mut out = linalg::zero_vector(self.field(), self.lie_dim());
        for (j, a) in v.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (k, b) in w.iter().enumerate() {
                if !b.is_zero() {
                    linalg::axpy(&mut out, &(a * b), &self.bracket[j][k]);
                }
            }
        }
        out
    }

    /// Coaction matrix `c(g)` over `A_0` at a point.
    pub fn rho_at(&self, p: &GroupPoint) -> Result<Vec<Vec<GrassmannElement>>> {
        let vals = p.values();
        self.rho.iter().map(|row| row.iter().map(|c| c.eval(p.algebra(), &vals)).collect()).collect()
    }

    /// Sample points of `G`: identity, parametrization values, and first-order points along Lie(G).
    pub fn group_samples(&self, alg: GrassmannAlgebra) -> Vec<GroupPoint> {
        sample_points(&self.group, self.parametrization.as_ref(), &[], self.group.lie_basis(), alg)
    }

    fn structural_report(&self) -> Report {
        let mut r = Report::new();
        let n = self.odd_dim();
        for a in 0..n {
            for b in 0..n {
                r.record(SUITE, "bracket-symmetry", self.bracket[a][b] == self.bracket[b][a], || {
                    format!("[{}, {}]", self.odd_names[a], self.odd_names[b])
                });
            }
        }
        // v ◁ [v, v] = 0 as a cubic form: every monomial coefficient must vanish.
        let f = self.field();
        for a in 0..n {
            for b in a..n {
                for c in b..n {
                    let perms: BTreeSet<[usize; 3]> =
                        [[a, b, c], [a, c, b], [b, a, c], [b, c, a], [c, a, b], [c, b, a]].into_iter().collect();
                    let mut total = linalg::zero_vector(f, n);
                    for [p, q, s] in perms {
                        let t = self.triangle(&linalg::unit_vector(f, n, p), &self.bracket[q][s]);
                        total = linalg::add_vectors(&total, &t);
                    }
                    r.record(SUITE, "odd-self-action", linalg::is_zero_vector(&total), || {
                        format!("cubic coefficient at ({}, {}, {})", self.odd_names[a], self.odd_names[b], self.odd_names[c])
                    });
                }
            }
        }
        r
    }

    /// Bracket symmetry and `v ◁ [v,v] = 0`, equivariance of the bracket, the module law for the
    /// coaction, and membership of the parametrization, on the given sample points.
    pub fn check_pair(&self, samples: &[GroupPoint]) -> Report {
        let mut r = self.structural_report();
        let n = self.odd_dim();
        let rdim = self.lie_dim();
        if let Some(p) = &self.parametrization {
            for (k, e) in self.group.equations().iter().enumerate() {
                let ok = p.pull_back(e).is_ok_and(|q| q.is_zero());
                r.record(SUITE, "parametrization-membership", ok, || format!("equation {k}"));
            }
        }
        if let Some(p0) = samples.first() {
            let id = self.group.identity(p0.algebra());
            let ok = self.rho_at(&id).is_ok_and(|m| {
                m.iter().enumerate().all(|(i, row)| row.iter().enumerate().all(|(j, x)| if i == j { x.is_one() } else { x.is_zero() }))
            });
            r.record(SUITE, "module-law", ok, || "coaction at the identity is not the identity".into());
        }
        for (s, p) in samples.iter().enumerate() {
            for (t, q) in samples.iter().enumerate() {
                let ok = match (self.rho_at(&p.mul_unchecked(q)), self.rho_at(p), self.rho_at(q)) {
                    (Ok(x), Ok(y), Ok(z)) => x == amat_mul(&y, &z),
                    _ => false,
                };
                r.record(SUITE, "module-law", ok, || format!("samples {s}, {t}"));
            }
            // [v_a^g, v_b^g] = [v_a, v_b]^g
            let (Ok(c), Ok(pm)) = (self.rho_at(p), self.action.action_matrix(p)) else {
                r.record(SUITE, "bracket-equivariance", false, || format!("sample {s} does not evaluate"));
                continue;
            };
            let alg = p.algebra();
            for a in 0..n {
                for b in 0..n {
                    let mut lhs = vec![alg.zero(); rdim];
                    for k in 0..n {
                        for l in 0..n {
                            let w = c[a][k].mul(&c[b][l]);
                            if w.is_zero() {
                                continue;
                            }
                            for (i, x) in self.bracket[k][l].iter().enumerate() {
                                if !x.is_zero() {
                                    lhs[i] = lhs[i].add(&w.scale(x));
                                }
                            }
                        }
                    }
                    let mut rhs = vec![alg.zero(); rdim];
                    for (j, y) in self.bracket[a][b].iter().enumerate() {
                        if y.is_zero() {
                            continue;
                        }
                        for i in 0..rdim {
                            rhs[i] = rhs[i].add(&pm[j][i].scale(y));
                        }
                    }
                    r.record(SUITE, "bracket-equivariance", lhs == rhs, || {
                        format!("sample {s}, [{}, {}]", self.odd_names[a], self.odd_names[b])
                    });
                }
            }
        }
        r
    }

    /// Every check for the pair: superalgebra axioms of the assembled algebra, pair conditions,
    /// and the group-action conditions, on samples over `alg`.
    pub fn check_all(&self, alg: GrassmannAlgebra) -> Report {
        let samples = self.group_samples(alg);
        let mut r = self.lie.check_axioms();
        r.merge(self.check_pair(&samples));
        r.merge(self.action.check_conditions(&samples, &self.test_functions()));
        r
    }

    /// Coordinate functions, their pairwise products with the first one, and the coaction entries.
    pub fn test_functions(&self) -> Vec<Polynomial> {
        let mut fs = self.group.coordinate_functions();
        if let Some(first) = fs.first().cloned() {
            let extra: Vec<Polynomial> = fs.iter().map(|c| c.mul(&first)).collect();
            fs.extend(extra);
        }
        fs.extend(self.rho.iter().flatten().filter(|p| !p.is_zero()).cloned());
        fs
    }

    /// `(G, V, -[,])` or the σ-twisted pair; for the assembled algebra both negate odd-odd brackets.
    pub fn transform(&self, kind: Transform) -> Result<HCPair> {
        match kind {
            Transform::NegateBracket | Transform::Sigma => {
                let bracket = self.bracket.iter().map(|row| row.iter().map(|v| linalg::scale_vector(&-self.field().one(), v)).collect()).collect();
                HCPair::new(
                    self.group.clone(),
                    self.even_names.clone(),
                    self.odd_names.clone(),
                    self.rho.clone(),
                    bracket,
                    self.parametrization.clone(),
                )
            }
        }
    }

    /// Returns a copy with one coaction polynomial replaced.
    pub fn with_rho_entry(&self, j: usize, k: usize, p: Polynomial) -> Result<HCPair> {
        let mut rho = self.rho.clone();
        rho[j][k] = p;
        HCPair::new(self.group.clone(), self.even_names.clone(), self.odd_names.clone(), rho, self.bracket.clone(), self.parametrization.clone())
    }

    /// Returns a copy with one bracket constant `[v_j, v_k]_i` replaced (the mirror entry too).
    pub fn with_bracket_constant(&self, j: usize, k: usize, i: usize, c: Scalar, symmetric: bool) -> Result<HCPair> {
        let mut bracket = self.bracket.clone();
        bracket[j][k][i] = c.clone();
        if symmetric {
            bracket[k][j][i] = c;
        }
        HCPair::new(self.group.clone(), self.even_names.clone(), self.odd_names.clone(), self.rho.clone(), bracket, self.parametrization.clone())
    }
}

/// Transformations of pairs that are involutive.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Transform {
    NegateBracket,
    Sigma,
}

fn assemble(
    group: &MatrixGroup,
    even_names: &[String],
    odd_names: &[String],
    rho: &[Vec<Polynomial>],
    bracket: &[Vec<Vector>],
) -> Result<LieSuperAlgebra> {
    let f = group.field();
    let r = group.lie_dim();
    let n = odd_names.len();
    let mut g = LieSuperAlgebra::new(f, even_names.to_vec(), odd_names.to_vec());
    let pad = |v: &[Scalar]| {
        let mut out = v.to_vec();
        out.resize(r + n, f.zero());
        out
    };
    for i in 0..r {
        for j in 0..r {
            g.set_bracket_raw(i, j, pad(&group.commutator_coordinates(i, j)?));
        }
    }
    for j in 0..n {
        for (i, x) in group.lie_basis().iter().enumerate() {
            let mut v = linalg::zero_vector(f, r + n);
            for k in 0..n {
                v[r + k] = group.tangent_pairing(x, &rho[j][k])?;
            }
            g.set_bracket(r + j, i, v);
        }
        for k in 0..n {
            g.set_bracket_raw(r + j, r + k, pad(&bracket[j][k]));
        }
    }
    Ok(g.with_half_bracket_two_op())
}

/// Identity, parametrization samples, explicit points, and first-order points `I + τ0τ1 X`
/// (plus a mixed product using `τ2τ3`) when the algebra has room.
pub fn sample_points(
    group: &MatrixGroup,
    param: Option<&Parametrization>,
    points: &[Matrix],
    lie_basis: &[Matrix],
    alg: GrassmannAlgebra,
) -> Vec<GroupPoint> {
    let f = group.field();
    let mut out = vec![group.identity(alg)];
    if let Some(p) = param {
        for vals in p.sample_values(f, 3) {
            if let Ok(pt) = p.eval(&vals).and_then(|m| group.point_from_scalars(alg, &m)) {
                out.push(pt);
            }
        }
    }
    for m in points {
        if let Ok(pt) = group.point_from_scalars(alg, m) {
            out.push(pt);
        }
    }
    if alg.generators() >= 2 {
        let t = alg.generator(0).mul(&alg.generator(1));
        for x in lie_basis {
            if let Ok(pt) = group.infinitesimal_point(&t, x) {
                out.push(pt);
            }
        }
        if alg.generators() >= 4 && !lie_basis.is_empty() && out.len() > 1 {
            let s = alg.generator(2).mul(&alg.generator(3));
            if let Ok(pt) = group.infinitesimal_point(&s, &lie_basis[lie_basis.len() - 1]) {
                let base = out[1.min(out.len() - 1)].clone();
                out.push(base.mul_unchecked(&pt));
            }
        }
    }
    out
}

/// A closed subgroup `H` (cut out by extra equations, with an optional dominant
/// parametrization and finitely many listed points) and a subspace `W ⊆ V`.
#[derive(Debug, Clone)]
pub struct SubPairData {
    name: String,
    subgroup: MatrixGroup,
    extra_equations: Vec<Polynomial>,
    parametrization: Option<Parametrization>,
    points: Vec<Matrix>,
    lie_coords: Matrix,
    odd_basis: Matrix,
}

impl SubPairData {
    /// `odd_basis` rows span `W`; the subgroup's Lie algebra is computed from all equations.
    pub fn new(
        pair: &HCPair,
        name: impl Into<String>,
        extra_equations: Vec<Polynomial>,
        parametrization: Option<Parametrization>,
        points: Vec<Matrix>,
        odd_basis: Matrix,
    ) -> Result<SubPairData> {
        let g = pair.group();
        let mut eqs = g.equations().to_vec();
        eqs.extend(extra_equations.iter().cloned());
        let subgroup = MatrixGroup::new(g.field(), g.size(), eqs, None)?;
        let lie_coords = subgroup
            .lie_basis()
            .iter()
            .map(|x| g.lie_coordinates(x).ok_or_else(|| Error::Precondition("Lie(H) is not inside Lie(G)".into())))
            .collect::<Result<Matrix>>()?;
        let n = pair.odd_dim();
        if odd_basis.iter().any(|v| v.len() != n) {
            return Err(Error::Dimension(format!("odd basis vectors must have length {n}")));
        }
        let odd_basis = linalg::span_basis(&odd_basis, n);
        Ok(SubPairData {
            name: name.into(),
            subgroup,
            extra_equations,
            parametrization,
            points,
            lie_coords,
            odd_basis,
        })
    }

    /// The sub-pair `(G, V)` itself, using the pair's parametrization.
    pub fn whole(pair: &HCPair) -> Result<SubPairData> {
        let n = pair.odd_dim();
        SubPairData::new(pair, "whole", vec![], pair.parametrization().cloned(), vec![], linalg::identity(pair.field(), n))
    }

    /// The trivial sub-pair `({I}, 0)`.
    pub fn trivial(pair: &HCPair) -> Result<SubPairData> {
        let g = pair.group();
        let m = g.size();
        let mut eqs = Vec::new();
        for i in 0..m {
            for j in 0..m {
                let c = g.coordinate(i, j);
                eqs.push(if i == j { c.sub(&Polynomial::one(g.field(), g.nvars())) } else { c });
            }
        }
        SubPairData::new(pair, "trivial", eqs, None, vec![linalg::identity(g.field(), m)], vec![])
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn subgroup(&self) -> &MatrixGroup {
        &self.subgroup
    }

    pub fn extra_equations(&self) -> &[Polynomial] {
        &self.extra_equations
    }

    pub fn parametrization(&self) -> Option<&Parametrization> {
        self.parametrization.as_ref()
    }

    pub fn points(&self) -> &[Matrix] {
        &self.points
    }

    /// Basis of `Lie(H)` in `Lie(G)`-coordinates.
    pub fn lie_coords(&self) -> &Matrix {
        &self.lie_coords
    }

    /// Echelon basis of `W`.
    pub fn odd_basis(&self) -> &Matrix {
        &self.odd_basis
    }

    pub fn has_samples(&self) -> bool {
        self.parametrization.is_some() || !self.points.is_empty()
    }

    /// Sample points of `H` over `alg`.
    pub fn samples(&self, alg: GrassmannAlgebra) -> Vec<GroupPoint> {
        sample_points(&self.subgroup, self.parametrization.as_ref(), &self.points, self.subgroup.lie_basis(), alg)
    }

    /// `H`-stability of `W`, `[W, W] ⊆ Lie(H)`, and membership of parametrization and points in `H`.
    pub fn check(&self, pair: &HCPair) -> Report {
        let mut r = Report::new();
        let f = pair.field();
        match inv_conditions(pair, self, &self.odd_basis) {
            Ok(rows) => {
                for (k, w) in self.odd_basis.iter().enumerate() {
                    let ok = rows.iter().all(|row| row.iter().zip(w).fold(f.zero(), |acc, (a, b)| &acc + &(a * b)).is_zero());
                    r.record(SUB_SUITE, "odd-stability", ok, || format!("{}: W basis vector {k}", self.name));
                }
            }
            Err(e) => r.record(SUB_SUITE, "odd-stability", false, || format!("{}: {e}", self.name)),
        }
        for (a, w1) in self.odd_basis.iter().enumerate() {
            for (b, w2) in self.odd_basis.iter().enumerate() {
                let br = pair.odd_bracket(w1, w2);
                r.record(SUB_SUITE, "bracket-closure", linalg::in_span(f, &self.lie_coords, &br), || {
                    format!("{}: [w{a}, w{b}] not in Lie(H)", self.name)
                });
            }
        }
        if let Some(p) = &self.parametrization {
            for (k, e) in self.subgroup.equations().iter().enumerate() {
                let ok = p.pull_back(e).is_ok_and(|q| q.is_zero());
                r.record(SUB_SUITE, "parametrization-membership", ok, || format!("{}: equation {k}", self.name));
            }
        }
        let alg0 = GrassmannAlgebra::new(0, f).expect("empty algebra");
        for (k, m) in self.points.iter().enumerate() {
            let ok = self.subgroup.point_from_scalars(alg0, m).is_ok();
            r.record(SUB_SUITE, "parametrization-membership", ok, || format!("{}: point {k}", self.name));
        }
        r
    }

    /// The sub-pair as a Harish-Chandra pair in its own right, with basis `Lie(H)` and `W`.
    pub fn to_pair(&self, pair: &HCPair) -> Result<HCPair> {
        let f = pair.field();
        let n = pair.odd_dim();
        let g = pair.group();
        let rdim_h = self.lie_coords.len();
        let h_group = MatrixGroup::new(
            f,
            g.size(),
            self.subgroup.equations().to_vec(),
            Some(self.lie_coords.iter().map(|c| g.lie_matrix(c)).collect()),
        )?;
        let nw = self.odd_basis.len();
        // express W-vectors in the W basis through pivot columns
        let mut ech = self.odd_basis.clone();
        let pivots = linalg::rref(&mut ech, n);
        let square: Matrix = self.odd_basis.iter().map(|row| pivots.iter().map(|&p| row[p].clone()).collect()).collect();
        let solve = if nw == 0 { vec![] } else { linalg::inverse(f, &square)? };
        let nv = g.nvars();
        let mut rho = vec![vec![Polynomial::zero(f, nv); nw]; nw];
        for (s, w) in self.odd_basis.iter().enumerate() {
            // image of w as polynomial coordinates in V
            let img: Vec<Polynomial> = (0..n)
                .map(|k| poly_scale_sum(f, nv, (0..n).map(|j| (pair.rho()[j][k].clone(), w[j].clone()))))
                .collect();
            for t in 0..nw {
                rho[s][t] = poly_scale_sum(f, nv, pivots.iter().enumerate().map(|(l, &p)| (img[p].clone(), solve[l][t].clone())));
            }
        }
        let mut bracket = vec![vec![Vec::new(); nw]; nw];
        for (s, w1) in self.odd_basis.iter().enumerate() {
            for (t, w2) in self.odd_basis.iter().enumerate() {
                let br = pair.odd_bracket(w1, w2);
                bracket[s][t] = linalg::coordinates(f, &self.lie_coords, &br)
                    .or_else(|| if linalg::is_zero_vector(&br) { Some(linalg::zero_vector(f, rdim_h)) } else { None })
                    .ok_or_else(|| Error::Precondition("[W, W] is not inside Lie(H)".into()))?;
            }
        }
        let even_names = (0..rdim_h).map(|i| format!("h{}", i + 1)).collect();
        let odd_names = (0..nw).map(|s| format!("w{}", s + 1)).collect();
        HCPair::new(h_group, even_names, odd_names, rho, bracket, self.parametrization.clone())
    }
}

/// Linear conditions on `u ∈ V` (rows to be annihilated) saying that `u^h - u ∈ W` for every
/// `h ∈ H`, using the parametrization identically and listed points by evaluation.
fn inv_conditions(pair: &HCPair, sub: &SubPairData, w: &Matrix) -> Result<Vec<Vector>> {
    if !sub.has_samples() {
        return Err(Error::Precondition(format!("sub-pair {} has neither parametrization nor points", sub.name)));
    }
    let f = pair.field();
    let n = pair.odd_dim();
    let qm = linalg::quotient_map(f, w, n);
    let qdim = qm.first().map_or(0, Vec::len);
    let mut rows = Vec::new();
    if qdim == 0 {
        return Ok(rows);
    }
    if let Some(p) = &sub.parametrization {
        let np = p.param_names().len();
        let pulled: Vec<Vec<Polynomial>> = pair
            .rho()
            .iter()
            .enumerate()
            .map(|(j, row)| {
                row.iter()
                    .enumerate()
                    .map(|(k, c)| {
                        let q = p.pull_back(c)?;
                        Ok(if j == k { q.sub(&Polynomial::one(f, np)) } else { q })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        for l in 0..qdim {
            let per_unknown: Vec<Polynomial> =
                (0..n).map(|j| poly_scale_sum(f, np, (0..n).map(|k| (pulled[j][k].clone(), qm[k][l].clone())))).collect();
            coefficient_rows(f, &per_unknown, &mut rows);
        }
    }
    let alg0 = GrassmannAlgebra::new(0, f)?;
    for m in &sub.points {
        let pt = pair.group().point_from_scalars(alg0, m)?;
        let c = pair.rho_at(&pt)?;
        for l in 0..qdim {
            let row: Vector = (0..n)
                .map(|j| {
                    (0..n).fold(f.zero(), |acc, k| {
                        let mut cjk = c[j][k].scalar_part();
                        if j == k {
                            cjk -= &f.one();
                        }
                        &acc + &(&cjk * &qm[k][l])
                    })
                })
                .collect();
            rows.push(row);
        }
    }
    Ok(rows)
}

/// `Inv_H(V/W)`: the largest `U ⊇ W` on whose image in `V/W` the group `H` acts trivially.
pub fn inv_submodule(pair: &HCPair, sub: &SubPairData, w: &Matrix) -> Result<Matrix> {
    let n = pair.odd_dim();
    let rows = inv_conditions(pair, sub, w)?;
    Ok(linalg::span_basis(&linalg::nullspace(pair.field(), &rows, n), n))
}

/// `(L : W) = { v ∈ V : [v, W] ⊆ L }` with `L` given in `Lie(G)`-coordinates.
pub fn transporter(pair: &HCPair, l: &Matrix, w: &Matrix) -> Matrix {
    let f = pair.field();
    let n = pair.odd_dim();
    let rdim = pair.lie_dim();
    let qm = linalg::quotient_map(f, l, rdim);
    let qdim = qm.first().map_or(0, Vec::len);
    let mut rows = Vec::new();
    for ws in w {
        for c in 0..qdim {
            let row: Vector = (0..n)
                .map(|j| {
                    let br = pair.odd_bracket(&linalg::unit_vector(f, n, j), ws);
                    br.iter().zip(&qm).fold(f.zero(), |acc, (b, q)| &acc + &(b * &q[c]))
                })
                .collect();
            rows.push(row);
        }
    }
    linalg::span_basis(&linalg::nullspace(f, &rows, n), n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SubPairKind {
    Normalizer,
    Centralizer,
}

impl std::fmt::Display for SubPairKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SubPairKind::Normalizer => "normalizer",
            SubPairKind::Centralizer => "centralizer",
        })
    }
}

/// Pair-level normalizer or centralizer: odd subspace, a Lie subalgebra of `Lie(G)`, and a
/// membership test for group points.
#[derive(Debug, Clone)]
pub struct SubPairResult {
    pub kind: SubPairKind,
    pub sub_name: String,
    /// `Inv_H(V/W)` or `Inv_H(V)`.
    pub invariant_part: Matrix,
    /// `(Lie(H) : W)` or `(0 : W)`.
    pub transporter_part: Matrix,
    pub odd_basis: Matrix,
    /// Lie-level cutout in `Lie(G)`-coordinates.
    pub lie_basis: Matrix,
    sub: SubPairData,
}

impl SubPairResult {
    pub fn odd_dim(&self) -> usize {
        self.odd_basis.len()
    }

    pub fn sub(&self) -> &SubPairData {
        &self.sub
    }

    /// Whether `g` normalizes (resp. centralizes) `H` on samples and stabilizes (resp. fixes) `W`.
    pub fn contains_point(&self, pair: &HCPair, g: &GroupPoint) -> Result<bool> {
        let group = pair.group();
        if !group.contains(g)? {
            return Ok(false);
        }
        let n = pair.odd_dim();
        let f = pair.field();
        let base = g.algebra();
        let big = GrassmannAlgebra::new(base.generators() + 4, f)?;
        let gb = g.embed(big)?;
        let ginv = gb.inverse_unchecked();
        // samples of H over the extra generators only, so the first-order points do not
        // interact with g's own nilpotents
        let shifted: Vec<GroupPoint> = {
            let small = GrassmannAlgebra::new(4, f)?;
            let images: Vec<GrassmannElement> = (0..4).map(|k| big.generator(base.generators() + k)).collect();
            self.sub
                .samples(small)
                .into_iter()
                .map(|h| {
                    let m = h.matrix().iter().map(|row| row.iter().map(|x| x.hom_apply(&images)).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>()?;
                    GroupPoint::from_matrix_unchecked(big, m)
                })
                .collect::<Result<_>>()?
        };
        let h_group = self.sub.subgroup();
        for h in &shifted {
            match self.kind {
                SubPairKind::Normalizer => {
                    if !h_group.contains(&ginv.mul_unchecked(h).mul_unchecked(&gb))?
                        || !h_group.contains(&gb.mul_unchecked(h).mul_unchecked(&ginv))?
                    {
                        return Ok(false);
                    }
                }
                SubPairKind::Centralizer => {
                    if gb.mul_unchecked(h).matrix() != h.mul_unchecked(&gb).matrix() {
                        return Ok(false);
                    }
                }
            }
        }
        let c = pair.rho_at(g)?;
        let w = &self.sub.odd_basis;
        for ws in w {
            let img: Vec<GrassmannElement> = (0..n)
                .map(|k| (0..n).fold(base.zero(), |acc, j| if ws[j].is_zero() { acc } else { acc.add(&c[j][k].scale(&ws[j])) }))
                .collect();
            match self.kind {
                SubPairKind::Normalizer => {
                    let qm = linalg::quotient_map(f, w, n);
                    for l in 0..qm.first().map_or(0, Vec::len) {
                        let v = img.iter().zip(&qm).fold(base.zero(), |acc, (x, q)| acc.add(&x.scale(&q[l])));
                        if !v.is_zero() {
                            return Ok(false);
                        }
                    }
                }
                SubPairKind::Centralizer => {
                    let same = img.iter().zip(ws).all(|(x, y)| *x == base.constant(y.clone()));
                    if !same {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }
}

/// Linear conditions on `x ∈ Lie(G)` (coordinates) for the Lie-level cutout.
fn lie_cutout(pair: &HCPair, sub: &SubPairData, kind: SubPairKind) -> Result<Matrix> {
    let g = pair.group();
    let f = pair.field();
    let r = pair.lie_dim();
    let n = pair.odd_dim();
    let mut rows: Vec<Vector> = Vec::new();
    // [x, Lie(H)] ⊆ Lie(H) (normalizer) or = 0 (centralizer)
    let target: Matrix = if kind == SubPairKind::Normalizer { sub.lie_coords.clone() } else { vec![] };
    let qm = linalg::quotient_map(f, &target, r);
    let qdim = qm.first().map_or(0, Vec::len);
    for hb in &sub.lie_coords {
        let cols: Vec<Vector> = (0..r)
            .map(|i| {
                let mut acc = linalg::zero_vector(f, r);
                for (j, c) in hb.iter().enumerate() {
                    if !c.is_zero() {
                        linalg::axpy(&mut acc, c, &g.commutator_coordinates(i, j).expect("closed Lie basis"));
                    }
                }
                acc
            })
            .collect();
        for l in 0..qdim {
            rows.push((0..r).map(|i| cols[i].iter().zip(&qm).fold(f.zero(), |a, (x, q)| &a + &(x * &q[l]))).collect());
        }
    }
    // conjugation by I + tX keeps H's equations (normalizer) or fixes H pointwise (centralizer)
    let m = g.size();
    let commutators = |h: &[Vec<Polynomial>], nv: usize| -> Vec<Vec<Vec<Polynomial>>> {
        g.lie_basis()
            .iter()
            .map(|x| {
                (0..m)
                    .map(|a| {
                        (0..m)
                            .map(|b| {
                                let mut acc = Polynomial::zero(f, nv);
                                for k in 0..m {
                                    acc = acc.add(&h[a][k].scale(&x[k][b])).sub(&h[k][b].scale(&x[a][k]));
                                }
                                acc
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect()
    };
    let mut parametrized: Vec<(Vec<Polynomial>, Vec<Vec<Polynomial>>, usize)> = Vec::new();
    if let Some(p) = sub.parametrization() {
        parametrized.push((p.images(), p.entries().to_vec(), p.param_names().len()));
    }
    for pt in sub.points() {
        let consts: Vec<Vec<Polynomial>> = pt.iter().map(|row| row.iter().map(|c| Polynomial::constant(f, 0, c.clone())).collect()).collect();
        let det = linalg::determinant(f, pt);
        let mut images: Vec<Polynomial> = consts.iter().flatten().cloned().collect();
        images.push(Polynomial::constant(f, 0, det.inv()?));
        parametrized.push((images, consts, 0));
    }
    for (images, h, nv) in parametrized {
        let comm = commutators(&h, nv);
        match kind {
            SubPairKind::Normalizer => {
                for e in sub.extra_equations() {
                    let per_unknown: Vec<Polynomial> = (0..r)
                        .map(|i| {
                            let mut acc = Polynomial::zero(f, nv);
                            for a in 0..m {
                                for b in 0..m {
                                    let de = e.derivative(a * m + b).compose(&images)?;
                                    acc = acc.add(&de.mul(&comm[i][a][b]));
                                }
                            }
                            Ok(acc)
                        })
                        .collect::<Result<_>>()?;
                    coefficient_rows(f, &per_unknown, &mut rows);
                }
            }
            SubPairKind::Centralizer => {
                for a in 0..m {
                    for b in 0..m {
                        let per_unknown: Vec<Polynomial> = (0..r).map(|i| comm[i][a][b].clone()).collect();
                        coefficient_rows(f, &per_unknown, &mut rows);
                    }
                }
            }
        }
    }
    // W ◁ x ⊆ W (normalizer) or = 0 (centralizer)
    let wt: Matrix = if kind == SubPairKind::Normalizer { sub.odd_basis.clone() } else { vec![] };
    let qv = linalg::quotient_map(f, &wt, n);
    let qvdim = qv.first().map_or(0, Vec::len);
    for ws in &sub.odd_basis {
        let imgs: Vec<Vector> = (0..r).map(|i| pair.triangle(ws, &linalg::unit_vector(f, r, i))).collect();
        for l in 0..qvdim {
            rows.push((0..r).map(|i| imgs[i].iter().zip(&qv).fold(f.zero(), |a, (x, q)| &a + &(x * &q[l]))).collect());
        }
    }
    Ok(linalg::span_basis(&linalg::nullspace(f, &rows, r), r))
}

/// Normalizer sub-pair: odd part `Inv_H(V/W) ∩ (Lie(H) : W)`.
pub fn normalizer_pair(pair: &HCPair, sub: &SubPairData) -> Result<SubPairResult> {
    sub_pair_result(pair, sub, SubPairKind::Normalizer)
}

/// Centralizer sub-pair: odd part `Inv_H(V) ∩ (0 : W)`.
pub fn centralizer_pair(pair: &HCPair, sub: &SubPairData) -> Result<SubPairResult> {
    sub_pair_result(pair, sub, SubPairKind::Centralizer)
}

/// The center: the centralizer of the whole pair (needs the pair's parametrization).
pub fn center_pair(pair: &HCPair) -> Result<SubPairResult> {
    centralizer_pair(pair, &SubPairData::whole(pair)?)
}

fn sub_pair_result(pair: &HCPair, sub: &SubPairData, kind: SubPairKind) -> Result<SubPairResult> {
    let check = sub.check(pair);
    if !check.is_ok() {
        return Err(Error::Precondition(format!("{} is not a sub-pair: {}", sub.name, check.failing_conditions().join(", "))));
    }
    let f = pair.field();
    let n = pair.odd_dim();
    let (invariant_part, transporter_part) = match kind {
        SubPairKind::Normalizer => (inv_submodule(pair, sub, &sub.odd_basis)?, transporter(pair, &sub.lie_coords, &sub.odd_basis)),
        SubPairKind::Centralizer => (inv_submodule(pair, sub, &vec![])?, transporter(pair, &vec![], &sub.odd_basis)),
    };
    let odd_basis = linalg::intersect(f, &invariant_part, &transporter_part, n);
    let lie_basis = lie_cutout(pair, sub, kind)?;
    Ok(SubPairResult { kind, sub_name: sub.name.clone(), invariant_part, transporter_part, odd_basis, lie_basis, sub: sub.clone() })
}

/// Morphism data `(φ, ψ)`: `φ` gives the target coordinates `g'_ij, d'` as polynomials in the
/// source coordinates; row `j` of `ψ` is the image of `v_j` in the target's `V'`.
#[derive(Debug, Clone)]
pub struct PairMorphism {
    pub phi: Vec<Polynomial>,
    pub psi: Matrix,
}

impl PairMorphism {
    pub fn identity(pair: &HCPair) -> PairMorphism {
        PairMorphism { phi: pair.group().coordinate_functions(), psi: linalg::identity(pair.field(), pair.odd_dim()) }
    }

    /// The inclusion of a sub-pair (as built by [`SubPairData::to_pair`]) into the pair.
    pub fn inclusion(pair: &HCPair, sub: &SubPairData) -> PairMorphism {
        PairMorphism { phi: pair.group().coordinate_functions(), psi: sub.odd_basis().clone() }
    }

    fn map_point(&self, target: &MatrixGroup, p: &GroupPoint) -> Result<GroupPoint> {
        let vals = p.values();
        let alg = p.algebra();
        let m = target.size();
        let imgs: Vec<GrassmannElement> = self.phi.iter().map(|c| c.eval(alg, &vals)).collect::<Result<_>>()?;
        let matrix = (0..m).map(|i| imgs[i * m..(i + 1) * m].to_vec()).collect();
        GroupPoint::from_matrix_unchecked(alg, matrix)
    }

    /// `Lie(φ)(X)` in the target's Lie coordinates.
    fn lie_map(&self, source: &MatrixGroup, target: &MatrixGroup, coords: &[Scalar]) -> Result<Option<Vector>> {
        let x = source.lie_matrix(coords);
        let m = target.size();
        let img: Matrix = (0..m)
            .map(|i| (0..m).map(|j| source.tangent_pairing(&x, &self.phi[i * m + j])).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        Ok(target.lie_coordinates(&img))
    }
}

/// Group-morphism property on samples, equivariance of `ψ`, and `[ψv, ψv'] = Lie(φ)[v, v']`.
pub fn check_morphism(source: &HCPair, target: &HCPair, mor: &PairMorphism, alg: GrassmannAlgebra) -> Report {
    let mut r = Report::new();
    let sg = source.group();
    let tg = target.group();
    let n = source.odd_dim();
    let n2 = target.odd_dim();
    let shape_ok = mor.phi.len() == tg.nvars()
        && mor.phi.iter().all(|p| p.nvars() == sg.nvars())
        && mor.psi.len() == n
        && mor.psi.iter().all(|row| row.len() == n2);
    r.record(MORPHISM_SUITE, "shape", shape_ok, || "morphism data has the wrong shape".into());
    if !shape_ok {
        return r;
    }
    let samples = source.group_samples(alg);
    for (s, p) in samples.iter().enumerate() {
        let Ok(pp) = mor.map_point(tg, p) else {
            r.record(MORPHISM_SUITE, "group-morphism", false, || format!("sample {s} does not map"));
            continue;
        };
        r.record(MORPHISM_SUITE, "group-morphism", tg.contains(&pp).unwrap_or(false), || format!("image of sample {s} not in target"));
        for (t, q) in samples.iter().enumerate() {
            let ok = match (mor.map_point(tg, &p.mul_unchecked(q)), mor.map_point(tg, q)) {
                (Ok(a), Ok(b)) => a == pp.mul_unchecked(&b),
                _ => false,
            };
            r.record(MORPHISM_SUITE, "group-morphism", ok, || format!("samples {s}, {t}"));
        }
        // ψ(v_j^g) = ψ(v_j)^{φ(g)}
        let (Ok(c), Ok(c2)) = (source.rho_at(p), target.rho_at(&pp)) else {
            r.record(MORPHISM_SUITE, "equivariance", false, || format!("sample {s} does not evaluate"));
            continue;
        };
        let pa = p.algebra();
        for j in 0..n {
            let lhs: Vec<GrassmannElement> = (0..n2)
                .map(|l| (0..n).fold(pa.zero(), |acc, k| acc.add(&c[j][k].scale(&mor.psi[k][l]))))
                .collect();
            let rhs: Vec<GrassmannElement> = (0..n2)
                .map(|l| (0..n2).fold(pa.zero(), |acc, k| acc.add(&c2[k][l].scale(&mor.psi[j][k]))))
                .collect();
            r.record(MORPHISM_SUITE, "equivariance", lhs == rhs, || format!("sample {s}, {}", source.odd_names()[j]));
        }
    }
    for a in 0..n {
        for b in 0..n {
            let lhs = target.odd_bracket(&mor.psi[a], &mor.psi[b]);
            let src = &source.bracket_table()[a][b];
            let rhs = mor.lie_map(sg, tg, src);
            let ok = matches!(rhs, Ok(Some(ref v)) if *v == lhs);
            r.record(MORPHISM_SUITE, "bracket-compatibility", ok, || {
                format!("[{}, {}]", source.odd_names()[a], source.odd_names()[b])
            });
        }
    }
    r
}

/// `v_j^g` as a vector over `A` for a point `g`.
pub fn odd_image(pair: &HCPair, g: &GroupPoint, v: &[Scalar]) -> Result<Vec<GrassmannElement>> {
    let c = pair.rho_at(g)?;
    let alg = g.algebra();
    let n = pair.odd_dim();
    Ok((0..n).map(|k| (0..n).fold(alg.zero(), |acc, j| if v[j].is_zero() { acc } else { acc.add(&c[j][k].scale(&v[j])) })).collect())
}

/// True when `small ⊆ big` as subspaces.
pub fn subspace_contained(field: Field, small: &Matrix, big: &Matrix) -> bool {
    is_span_subset(field, small, big)
}

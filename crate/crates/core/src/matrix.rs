//! Projection lattices of small complex inner-product spaces.
//!
//! Projections are dense `d x d` complex matrices with `d <= 8`. Meets are
//! read off the null space of `(I - P) + (I - Q)`, joins off the range of
//! `P + Q`; both use a Hermitian eigendecomposition with a rank threshold of
//! [`RANK_THRESHOLD`].

use std::f64::consts::PI;
use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::implication::{poly_with, OrthoOps};

pub const MAX_DIM: usize = 8;
pub const DEFAULT_TOLERANCE: f64 = 1e-9;
pub const RANK_THRESHOLD: f64 = 1e-7;
pub const DEFAULT_SEED: u64 = 0xC0FFEE;
pub const DEFAULT_SAMPLES: usize = 200;

pub type CMatrix = DMatrix<Complex64>;

/// An orthogonal projection.
#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    m: CMatrix,
}

impl Projection {
    /// Checks that `m` is Hermitian and idempotent within `tol`.
    pub fn new(m: CMatrix, tol: f64) -> Result<Projection> {
        if !m.is_square() || m.nrows() == 0 || m.nrows() > MAX_DIM {
            return Err(Error::InvalidArgument(format!(
                "projection must be square with dimension 1..={MAX_DIM}, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        let herm = (&m - m.adjoint()).norm();
        let idem = (&m * &m - &m).norm();
        if herm > tol || idem > tol {
            return Err(Error::Numerical(format!(
                "not a projection: hermitian defect {herm:.3e}, idempotent defect {idem:.3e}"
            )));
        }
        Ok(Projection { m })
    }

    /// Projection onto the span of orthonormal columns.
    fn from_orthonormal(cols: &CMatrix, d: usize) -> Projection {
        if cols.ncols() == 0 {
            return Projection { m: CMatrix::zeros(d, d) };
        }
        Projection { m: cols * cols.adjoint() }
    }

    /// `|v><v| / <v|v>`.
    pub fn rank_one(v: &DVector<Complex64>) -> Result<Projection> {
        let n = v.norm();
        if n < RANK_THRESHOLD || v.len() > MAX_DIM {
            return Err(Error::InvalidArgument("rank-one projection needs a nonzero vector".into()));
        }
        let u = v / Complex64::new(n, 0.0);
        Ok(Projection { m: &u * u.adjoint() })
    }

    pub fn zero(d: usize) -> Projection {
        Projection { m: CMatrix::zeros(d, d) }
    }

    pub fn identity(d: usize) -> Projection {
        Projection { m: CMatrix::identity(d, d) }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn rank(&self) -> usize {
        self.m.trace().re.round() as usize
    }

    /// Frobenius distance.
    pub fn distance(&self, other: &Projection) -> f64 {
        (&self.m - &other.m).norm()
    }

    pub fn approx_eq(&self, other: &Projection, tol: f64) -> bool {
        self.distance(other) <= tol
    }

    /// `self <= other`, i.e. `other * self = self`.
    pub fn approx_leq(&self, other: &Projection, tol: f64) -> bool {
        (&other.m * &self.m - &self.m).norm() <= tol
    }

    /// Hermitian and idempotent defects.
    pub fn defects(&self) -> (f64, f64) {
        ((&self.m - self.m.adjoint()).norm(), (&self.m * &self.m - &self.m).norm())
    }
}

/// Orthonormal eigenvectors of a Hermitian matrix whose eigenvalues satisfy
/// `keep`.
fn eigvecs_where(h: CMatrix, keep: impl Fn(f64) -> bool) -> CMatrix {
    let d = h.nrows();
    let eig = SymmetricEigen::new(h);
    let cols: Vec<_> = (0..d)
        .filter(|&i| keep(eig.eigenvalues[i]))
        .map(|i| eig.eigenvectors.column(i).into_owned())
        .collect();
    if cols.is_empty() {
        CMatrix::zeros(d, 0)
    } else {
        CMatrix::from_columns(&cols)
    }
}

fn check_dims(p: &Projection, q: &Projection) -> Result<()> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch(p.dim(), q.dim()));
    }
    Ok(())
}

/// Projection onto `range(P) ∩ range(Q)`.
pub fn proj_meet(p: &Projection, q: &Projection) -> Result<Projection> {
    check_dims(p, q)?;
    let d = p.dim();
    let id = CMatrix::identity(d, d);
    let h = (&id - &p.m) + (&id - &q.m);
    Ok(Projection::from_orthonormal(&eigvecs_where(h, |ev| ev.abs() < RANK_THRESHOLD), d))
}

/// Projection onto `range(P) + range(Q)`.
pub fn proj_join(p: &Projection, q: &Projection) -> Result<Projection> {
    check_dims(p, q)?;
    let h = &p.m + &q.m;
    Ok(Projection::from_orthonormal(&eigvecs_where(h, |ev| ev > RANK_THRESHOLD), p.dim()))
}

pub fn proj_ortho(p: &Projection) -> Projection {
    let d = p.dim();
    Projection { m: CMatrix::identity(d, d) - &p.m }
}

pub fn proj_commutes(p: &Projection, q: &Projection, tol: f64) -> Result<bool> {
    check_dims(p, q)?;
    Ok((&p.m * &q.m - &q.m * &p.m).norm() <= tol)
}

/// Numerical projection logic of one fixed dimension.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatrixLogicContext {
    dim: usize,
    tol: f64,
}

impl MatrixLogicContext {
    pub fn new(dim: usize, tol: f64) -> Result<MatrixLogicContext> {
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::InvalidArgument(format!("dimension {dim} outside 1..={MAX_DIM}")));
        }
        if !(tol > 0.0 && tol <= 1e-6) {
            return Err(Error::InvalidArgument(format!("tolerance {tol} outside (0, 1e-6]")));
        }
        Ok(MatrixLogicContext { dim, tol })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    pub fn zero(&self) -> Projection {
        Projection::zero(self.dim)
    }

    pub fn one(&self) -> Projection {
        Projection::identity(self.dim)
    }

    pub fn commutes(&self, p: &Projection, q: &Projection) -> bool {
        proj_commutes(p, q, self.tol).expect("same dimension")
    }

    /// Marsden's commutator; for a pair of projections it is `⌀(P, Q)`.
    pub fn com(&self, p: &Projection, q: &Projection) -> Projection {
        let (op, oq) = (proj_ortho(p), proj_ortho(q));
        let a = OrthoOps::join(self, &self.meet2(p, q), &self.meet2(p, &oq));
        let b = OrthoOps::join(self, &self.meet2(&op, q), &self.meet2(&op, &oq));
        OrthoOps::join(self, &a, &b)
    }

    fn meet2(&self, p: &Projection, q: &Projection) -> Projection {
        OrthoOps::meet(self, p, q)
    }

    /// `P ∘_θ Q = e^{iθP} Q e^{-iθP}`, cross-checked against the expansion
    /// `Q + (e^{iθ}-1)PQ + (e^{-iθ}-1)QP + 2(1-cos θ)PQP`.
    pub fn circ(&self, p: &Projection, q: &Projection, theta: f64) -> Result<Projection> {
        check_dims(p, q)?;
        let d = p.dim();
        let phase = Complex64::from_polar(1.0, theta);
        let u = CMatrix::identity(d, d) + &p.m * (phase - 1.0);
        let conj = &u * &q.m * u.adjoint();
        let pq = &p.m * &q.m;
        let qp = &q.m * &p.m;
        let pqp = &pq * &p.m;
        let expanded = &q.m + &pq * (phase - 1.0) + &qp * (phase.conj() - 1.0)
            + pqp * Complex64::new(2.0 * (1.0 - theta.cos()), 0.0);
        let gap = (&conj - &expanded).norm();
        if gap > self.tol {
            return Err(Error::Numerical(format!("conjugation and expansion differ by {gap:.3e}")));
        }
        Ok(Projection { m: conj })
    }

    pub fn poly(&self, j: u8, p: &Projection, q: &Projection) -> Projection {
        poly_with(self, j, p, q)
    }

    /// `P =>_{j,θ,0} Q = P =>_j (P ∘_θ Q)` and
    /// `P =>_{j,θ,1} Q = (Q ∘_θ P) =>_j Q`.
    pub fn twisted_impl(&self, j: u8, theta: f64, i: u8, p: &Projection, q: &Projection) -> Result<Projection> {
        if j > 5 || i > 1 {
            return Err(Error::InvalidArgument(format!("twisted implication ({j}, θ, {i}) needs j <= 5, i <= 1")));
        }
        Ok(if i == 0 {
            self.poly(j, p, &self.circ(p, q, theta)?)
        } else {
            self.poly(j, &self.circ(q, p, theta)?, q)
        })
    }
}

impl OrthoOps for MatrixLogicContext {
    type Elem = Projection;

    fn meet(&self, a: &Projection, b: &Projection) -> Projection {
        proj_meet(a, b).expect("same dimension")
    }

    fn join(&self, a: &Projection, b: &Projection) -> Projection {
        proj_join(a, b).expect("same dimension")
    }

    fn ortho(&self, a: &Projection) -> Projection {
        proj_ortho(a)
    }
}

fn gaussian(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

fn random_unitary(rng: &mut impl Rng, d: usize) -> CMatrix {
    CMatrix::from_fn(d, d, |_, _| gaussian(rng)).qr().q()
}

/// Uniformly oriented projection of rank `r`.
pub fn random_projection(rng: &mut impl Rng, d: usize, r: usize) -> Projection {
    let u = random_unitary(rng, d);
    Projection::from_orthonormal(&u.columns(0, r).into_owned(), d)
}

/// How a sample pair was drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PairKind {
    /// Independent projections of random rank.
    Generic,
    /// Diagonal in a shared random basis.
    Commuting,
    /// A commuting block plus a generic 2-dimensional block, rotated by a
    /// random unitary, so `⌀(P, Q)` is neither 0 nor 1.
    Mixed,
}

pub fn random_pair(rng: &mut impl Rng, d: usize, kind: PairKind) -> (Projection, Projection) {
    match kind {
        PairKind::Generic => {
            let (rp, rq) = (rng.random_range(0..=d), rng.random_range(0..=d));
            (random_projection(rng, d, rp), random_projection(rng, d, rq))
        }
        PairKind::Commuting => {
            let u = random_unitary(rng, d);
            let mut diag = |_| {
                let mask = DVector::from_fn(d, |_, _| Complex64::new(rng.random_range(0..2) as f64, 0.0));
                &u * CMatrix::from_diagonal(&mask) * u.adjoint()
            };
            let (p, q) = (diag(0), diag(1));
            (Projection { m: p }, Projection { m: q })
        }
        PairKind::Mixed if d < 3 => random_pair(rng, d, PairKind::Generic),
        PairKind::Mixed => {
            let k = d - 2;
            let mut p = CMatrix::zeros(d, d);
            let mut q = CMatrix::zeros(d, d);
            for i in 0..k {
                p[(i, i)] = Complex64::new(rng.random_range(0..2) as f64, 0.0);
                q[(i, i)] = Complex64::new(rng.random_range(0..2) as f64, 0.0);
            }
            let bp = random_projection(rng, 2, 1);
            let bq = random_projection(rng, 2, 1);
            p.view_mut((k, k), (2, 2)).copy_from(&bp.m);
            q.view_mut((k, k), (2, 2)).copy_from(&bq.m);
            let u = random_unitary(rng, d);
            (Projection { m: &u * p * u.adjoint() }, Projection { m: &u * q * u.adjoint() })
        }
    }
}

/// A relation that missed its tolerance on one sample.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RelationFailure {
    pub relation: String,
    pub dim: usize,
    pub sample: usize,
    pub kind: PairKind,
    pub theta: f64,
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TwistedRelationsReport {
    pub seed: u64,
    pub dims: Vec<usize>,
    pub samples_per_dim: usize,
    pub checked: usize,
    pub max_deviation: f64,
    pub failures: Vec<RelationFailure>,
}

impl TwistedRelationsReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Deviations of every identity checked on one sample, by name.
fn sample_deviations(ctx: &MatrixLogicContext, p: &Projection, q: &Projection, theta: f64) -> Result<Vec<(String, f64)>> {
    let mut out: Vec<(String, f64)> = Vec::new();
    let imp = |j, i| ctx.twisted_impl(j, theta, i, p, q);
    let poly = |j| ctx.poly(j, p, q);
    let c = ctx.com(p, q);
    let oc = proj_ortho(&c);
    let five = poly(5);
    let with_n = |x: &Projection| OrthoOps::join(ctx, &five, &OrthoOps::meet(ctx, x, &oc));

    let exact = [
        ("(i) j=0 i=0", imp(0, 0)?, poly(0)),
        ("(i) j=0 i=1", imp(0, 1)?, poly(0)),
        ("(ii) j=1 i=0", imp(1, 0)?, poly(1)),
        ("(iii) j=2 i=1", imp(2, 1)?, poly(2)),
        ("(iv) j=3 i=0", imp(3, 0)?, poly(3)),
        ("(v) j=4 i=1", imp(4, 1)?, poly(4)),
        ("(vi) j=5 i=0", imp(5, 0)?, poly(5)),
        ("(vi) j=5 i=1", imp(5, 1)?, poly(5)),
        ("(vii) j=1 i=1", imp(1, 1)?, with_n(&ctx.circ(q, p, theta)?)),
        ("(viii) j=2 i=0", imp(2, 0)?, with_n(&ctx.circ(p, &proj_ortho(q), theta)?)),
        ("(ix) j=3 i=1", imp(3, 1)?, with_n(&ctx.circ(q, &proj_ortho(p), theta)?)),
        ("(x) j=4 i=0", imp(4, 0)?, with_n(&ctx.circ(p, q, theta)?)),
    ];
    for (name, lhs, rhs) in exact {
        out.push((name.to_string(), lhs.distance(&rhs)));
    }

    // Modus ponens for j = 2..5 except (3, 1), directly and through the
    // non-Boolean part.
    for j in 2..=5u8 {
        for i in 0..=1u8 {
            if (j, i) == (3, 1) {
                continue;
            }
            let x = imp(j, i)?;
            let pm = OrthoOps::meet(ctx, p, &x);
            out.push((format!("MP j={j} i={i}"), (q.matrix() * pm.matrix() - pm.matrix()).norm()));
            let npart = OrthoOps::meet(ctx, p, &OrthoOps::meet(ctx, &x, &oc));
            out.push((format!("MP non-Boolean part j={j} i={i}"), npart.matrix().norm()));
        }
    }

    // θ = 0 gives back the polynomials.
    for j in 0..=5u8 {
        for i in 0..=1u8 {
            let x = ctx.twisted_impl(j, 0.0, i, p, q)?;
            out.push((format!("theta=0 j={j} i={i}"), x.distance(&poly(j))));
        }
    }

    // Commuting pairs are fixed by the twist.
    if ctx.commutes(p, q) {
        out.push(("commuting fixed point".into(), ctx.circ(p, q, theta)?.distance(q)));
    }

    // Orthomodular law on P ^ Q <= Q.
    let lo = OrthoOps::meet(ctx, p, q);
    let om = OrthoOps::join(ctx, &lo, &OrthoOps::meet(ctx, &proj_ortho(&lo), q));
    out.push(("orthomodular law".into(), om.distance(q)));

    // Every produced projection is one.
    for (name, x) in [("com", &c), ("circ", &ctx.circ(p, q, theta)?), ("meet", &lo)] {
        let (h, i) = x.defects();
        out.push((format!("{name} is a projection"), h.max(i)));
    }
    Ok(out)
}

/// Checks relations (i)–(x), modus ponens for the twisted implications with
/// `j >= 2`, `(j, i) != (3, 1)`, the `θ = 0` reduction and the projection
/// invariants on seeded samples.
pub fn verify_twisted_relations(seed: u64, dims: &[usize], samples: usize, tol: f64) -> Result<TwistedRelationsReport> {
    let kinds = [PairKind::Generic, PairKind::Commuting, PairKind::Mixed];
    let mut results = Vec::new();
    for &d in dims {
        let ctx = MatrixLogicContext::new(d, tol)?;
        let per_dim: Vec<Result<Vec<(String, f64, usize, PairKind, f64)>>> = (0..samples)
            .into_par_iter()
            .map(|s| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream((d * 100_000 + s) as u64);
                let kind = kinds[s % kinds.len()];
                let (p, q) = random_pair(&mut rng, d, kind);
                let theta = rng.random_range(0.0..2.0 * PI);
                let devs = sample_deviations(&ctx, &p, &q, theta)?;
                Ok(devs.into_iter().map(|(n, dev)| (n, dev, s, kind, theta)).collect())
            })
            .collect();
        for r in per_dim {
            results.push((d, r?));
        }
    }
    let mut report = TwistedRelationsReport {
        seed,
        dims: dims.to_vec(),
        samples_per_dim: samples,
        checked: 0,
        max_deviation: 0.0,
        failures: Vec::new(),
    };
    for (dim, devs) in results {
        for (relation, deviation, sample, kind, theta) in devs {
            report.checked += 1;
            report.max_deviation = report.max_deviation.max(deviation);
            if !(deviation <= tol) {
                report.failures.push(RelationFailure { relation, dim, sample, kind, theta, deviation });
            }
        }
    }
    Ok(report)
}

/// The witness that `=>_{1,θ,1}` is not a lattice polynomial.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NonPolynomialWitness {
    pub theta: f64,
    /// `<1|φ>`.
    pub overlap_one_phi: Complex64,
    /// `<φ|φ(θ)>`.
    pub overlap_phi_phi_theta: Complex64,
    /// `<1|φ(θ)>`.
    pub overlap_one_phi_theta: Complex64,
    /// `⌀(P, Q) = 0`.
    pub commutator_vanishes: bool,
    /// `Q ∘_θ P = |φ(θ)><φ(θ)|`.
    pub twist_is_rank_one: bool,
    /// `P =>_{1,θ,1} Q = Q ∘_θ P`.
    pub implication_is_twist: bool,
    /// Distance from `P =>_{1,θ,1} Q` to each of `0, P, P', Q, Q', 1`.
    pub distances: Vec<(String, f64)>,
    /// The same test for `=>_{2,θ,0}`, `=>_{3,θ,1}` and `=>_{4,θ,0}`:
    /// smallest distance to the six-element subalgebra.
    pub other_operations: Vec<(String, f64)>,
    /// `P`, `Q` and the implication value, for CSV dumps.
    #[serde(skip)]
    pub matrices: Vec<(String, Projection)>,
}

impl NonPolynomialWitness {
    pub fn success(&self, tol: f64) -> bool {
        self.commutator_vanishes
            && self.twist_is_rank_one
            && self.implication_is_twist
            && self.distances.iter().all(|(_, d)| *d > tol)
            && self.other_operations.iter().all(|(_, d)| *d > tol)
    }

    pub fn to_csv(&self) -> String {
        let refs: Vec<(&str, &Projection)> = self.matrices.iter().map(|(n, p)| (n.as_str(), p)).collect();
        matrices_csv(&refs)
    }
}

/// `φ = (|0> + √3 e^{iθ}|1>) / 2`.
fn phi(theta: f64) -> DVector<Complex64> {
    DVector::from_vec(vec![
        Complex64::new(0.5, 0.0),
        Complex64::from_polar(3f64.sqrt() / 2.0, theta),
    ])
}

pub fn non_polynomial_witness(theta: f64, tol: f64) -> Result<NonPolynomialWitness> {
    if !(theta > 0.0 && theta < 2.0 * PI) {
        return Err(Error::InvalidArgument(format!("θ = {theta} must lie in (0, 2π)")));
    }
    let ctx = MatrixLogicContext::new(2, tol)?;
    let (v_phi, v_phi_t) = (phi(0.0), phi(theta));
    let ket1 = DVector::from_vec(vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]);
    let p = Projection::rank_one(&v_phi)?;
    let q = Projection::rank_one(&ket1)?;
    let target = Projection::rank_one(&v_phi_t)?;

    let twist = ctx.circ(&q, &p, theta)?;
    let imp = ctx.twisted_impl(1, theta, 1, &p, &q)?;
    let six = [
        ("0", ctx.zero()),
        ("P", p.clone()),
        ("P'", proj_ortho(&p)),
        ("Q", q.clone()),
        ("Q'", proj_ortho(&q)),
        ("1", ctx.one()),
    ];
    let distances: Vec<(String, f64)> = six.iter().map(|(n, x)| (n.to_string(), imp.distance(x))).collect();
    let mut other_operations = Vec::new();
    for (j, i) in [(2u8, 0u8), (3, 1), (4, 0)] {
        let x = ctx.twisted_impl(j, theta, i, &p, &q)?;
        let nearest = six.iter().map(|(_, y)| x.distance(y)).fold(f64::INFINITY, f64::min);
        other_operations.push((format!("j={j} i={i}"), nearest));
    }
    Ok(NonPolynomialWitness {
        theta,
        overlap_one_phi: ket1.dotc(&v_phi),
        overlap_phi_phi_theta: v_phi.dotc(&v_phi_t),
        overlap_one_phi_theta: ket1.dotc(&v_phi_t),
        commutator_vanishes: ctx.com(&p, &q).matrix().norm() <= tol,
        twist_is_rank_one: twist.approx_eq(&target, tol),
        implication_is_twist: imp.approx_eq(&twist, tol),
        distances,
        other_operations,
        matrices: vec![("P".into(), p), ("Q".into(), q), ("P=>_{1,theta,1}Q".into(), imp)],
    })
}

/// Long-format CSV: `label,row,col,re,im`.
pub fn matrices_csv(items: &[(&str, &Projection)]) -> String {
    let mut out = String::from("label,row,col,re,im\n");
    for (label, p) in items {
        for r in 0..p.dim() {
            for c in 0..p.dim() {
                let z = p.matrix()[(r, c)];
                let _ = writeln!(out, "{label},{r},{c},{:.17e},{:.17e}", z.re, z.im);
            }
        }
    }
    out
}

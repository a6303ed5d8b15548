//! Representations of the (0,n) orbifold fillings of the figure-8 knot
//! complement and their lightning curves.

use std::fmt;
use std::ops::Mul;

use num_complex::Complex64 as C;
use thiserror::Error;

use crate::analysis::{
    estimate_dimension_length_regression, extent, geometric_scales, AnalysisError, DimensionEstimate, Pt,
};

#[derive(Clone, Copy, PartialEq, Debug)]
pub struct Mobius {
    pub m: [[C; 2]; 2],
}

impl Mobius {
    pub fn new(a: C, b: C, c: C, d: C) -> Mobius {
        Mobius { m: [[a, b], [c, d]] }
    }

    pub fn identity() -> Mobius {
        let (o, z) = (C::new(1.0, 0.0), C::new(0.0, 0.0));
        Mobius::new(o, z, z, o)
    }

    pub fn det(&self) -> C {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn trace(&self) -> C {
        self.m[0][0] + self.m[1][1]
    }

    /// Scaled to determinant 1.
    pub fn normalized(&self) -> Mobius {
        let s = self.det().sqrt();
        self.scale(1.0 / s)
    }

    /// Scaled to |det| = 1; keeps products of long words bounded.
    fn renormalized(&self) -> Mobius {
        let s = self.det().norm().sqrt();
        self.scale(C::new(1.0 / s, 0.0))
    }

    fn scale(&self, s: C) -> Mobius {
        Mobius::new(self.m[0][0] * s, self.m[0][1] * s, self.m[1][0] * s, self.m[1][1] * s)
    }

    /// Inverse of a determinant-1 matrix (the adjugate, rescaled otherwise).
    pub fn inverse(&self) -> Mobius {
        let d = self.det();
        Mobius::new(self.m[1][1] / d, -self.m[0][1] / d, -self.m[1][0] / d, self.m[0][0] / d)
    }

    pub fn apply(&self, z: C) -> C {
        (self.m[0][0] * z + self.m[0][1]) / (self.m[1][0] * z + self.m[1][1])
    }

    /// Frobenius distance, minimized over the sign ambiguity of the lift.
    pub fn dist_projective(&self, o: &Mobius) -> f64 {
        let d = |s: f64| {
            let mut t = 0.0;
            for i in 0..2 {
                for j in 0..2 {
                    t += (self.m[i][j] - o.m[i][j] * s).norm_sqr();
                }
            }
            t.sqrt()
        };
        d(1.0).min(d(-1.0))
    }

    pub fn pow(&self, k: u32) -> Mobius {
        let mut r = Mobius::identity();
        for _ in 0..k {
            r = (r * *self).renormalized();
        }
        r
    }

    /// Fixed point where the derivative has modulus < 1.
    pub fn attracting_fixed_point(&self) -> Option<C> {
        let [[a, b], [c, d]] = self.normalized().m;
        if c.norm() < 1e-14 {
            return None;
        }
        let disc = ((d - a) * (d - a) + b * c * 4.0).sqrt();
        [((a - d) + disc) / (c * 2.0), ((a - d) - disc) / (c * 2.0)].into_iter().find(|p| (c * p + d).norm_sqr() > 1.0)
    }
}

impl Mul for Mobius {
    type Output = Mobius;
    fn mul(self, o: Mobius) -> Mobius {
        let a = self.m;
        let b = o.m;
        let e = |i: usize, j: usize| a[i][0] * b[0][j] + a[i][1] * b[1][j];
        Mobius::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KleinianError {
    #[error("n must be at least 2")]
    BadOrder,
    #[error("Newton iteration did not converge at continuation step {0}")]
    NewtonDivergence(usize),
    #[error("conjugating element is singular")]
    Singular,
    #[error("the conjugating element has no attracting fixed point")]
    NoAttractingFixedPoint,
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
}

#[derive(Clone, Debug)]
pub struct GroupRep {
    pub a: Mobius,
    pub b: Mobius,
    pub t: Mobius,
    /// None for the cusped limit.
    pub n: Option<u32>,
    /// (tr A, tr B, tr AB).
    pub traces: (C, C, C),
    /// Set if the continuation jumped between consecutive steps.
    pub branch_jump: bool,
}

/// Commutator trace target -2cos(pi/n), or -2 in the cusped limit.
pub fn kappa(n: Option<u32>) -> f64 {
    match n {
        Some(n) => -2.0 * (std::f64::consts::PI / n as f64).cos(),
        None => -2.0,
    }
}

/// Commutator trace as a function of x once y = x/(x-1) and z = x.
fn residual(x: C, k: f64) -> (C, C) {
    let one = C::new(1.0, 0.0);
    let y = x / (x - one);
    let dy = -one / ((x - one) * (x - one));
    let f = x * x * 2.0 + y * y - x * x * y - 2.0 - k;
    let df = x * 4.0 + y * dy * 2.0 - x * y * 2.0 - x * x * dy;
    (f, df)
}

fn newton(mut x: C, k: f64) -> Option<C> {
    for _ in 0..100 {
        let (f, df) = residual(x, k);
        let dx = f / df;
        x -= dx;
        if !x.is_finite() {
            return None;
        }
        if dx.norm() < 1e-15 * (1.0 + x.norm()) {
            return Some(x);
        }
    }
    let (f, _) = residual(x, k);
    (f.norm() < 1e-12).then_some(x)
}

const CONTINUATION_STEPS: usize = 400;

/// Trace solution continued from the cusped limit, matrices in normal form,
/// and the conjugating element.
pub fn solve_representation(n: Option<u32>) -> Result<GroupRep, KleinianError> {
    if n.is_some_and(|n| n < 2) {
        return Err(KleinianError::BadOrder);
    }
    let mut x = C::new(1.5, 3f64.sqrt() / 2.0);
    let target = n.map_or(0.0, |n| 1.0 / n as f64);
    let mut branch_jump = false;
    if n.is_some() {
        for step in 1..=CONTINUATION_STEPS {
            let s = target * step as f64 / CONTINUATION_STEPS as f64;
            let k = -2.0 * (std::f64::consts::PI * s).cos();
            let next = newton(x, k).ok_or(KleinianError::NewtonDivergence(step))?;
            if (next - x).norm() > 0.1 {
                branch_jump = true;
            }
            x = next;
        }
    }
    let one = C::new(1.0, 0.0);
    let zero = C::new(0.0, 0.0);
    let y = x / (x - one);
    let z = x;
    let a = Mobius::new(x, -one, one, zero);
    // zeta + 1/zeta = tr AB
    let zeta = (z + (z * z - 4.0).sqrt()) / 2.0;
    let b = Mobius::new(zero, zeta, -one / zeta, y);
    let t = intertwiner(&[(a, a * b), (b, b * a * b)])?;
    Ok(GroupRep { a, b, t, n, traces: (x, y, z), branch_jump })
}

/// Solves T X = Y T for all pairs, fixing one entry of T to 1 and taking the
/// least-squares fit with the smallest residual.
fn intertwiner(pairs: &[(Mobius, Mobius)]) -> Result<Mobius, KleinianError> {
    // Unknowns t = (t00, t01, t10, t11); each pair gives 4 linear equations.
    let mut rows: Vec<[C; 4]> = Vec::new();
    for (x, y) in pairs {
        let (x, y) = (x.m, y.m);
        for i in 0..2 {
            for j in 0..2 {
                // (T X)_{ij} - (Y T)_{ij}
                let mut r = [C::new(0.0, 0.0); 4];
                for k in 0..2 {
                    r[i * 2 + k] += x[k][j];
                    r[k * 2 + j] -= y[i][k];
                }
                rows.push(r);
            }
        }
    }
    let mut best: Option<(f64, [C; 4])> = None;
    for fixed in 0..4 {
        let free: Vec<usize> = (0..4).filter(|k| *k != fixed).collect();
        // Normal equations for the three free unknowns.
        let mut m = [[C::new(0.0, 0.0); 4]; 3];
        for r in &rows {
            for (a, &ia) in free.iter().enumerate() {
                for (b, &ib) in free.iter().enumerate() {
                    m[a][b] += r[ia].conj() * r[ib];
                }
                m[a][3] -= r[ia].conj() * r[fixed];
            }
        }
        let Some(sol) = gauss3(m) else { continue };
        let mut t = [C::new(0.0, 0.0); 4];
        t[fixed] = C::new(1.0, 0.0);
        for (a, &ia) in free.iter().enumerate() {
            t[ia] = sol[a];
        }
        let norm: f64 = t.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        let res: f64 = rows
            .iter()
            .map(|r| (0..4).fold(C::new(0.0, 0.0), |acc, k| acc + r[k] * t[k]).norm_sqr())
            .sum::<f64>()
            .sqrt()
            / norm;
        if best.is_none_or(|(b, _)| res < b) {
            best = Some((res, t));
        }
    }
    let (_, t) = best.ok_or(KleinianError::Singular)?;
    let tm = Mobius::new(t[0], t[1], t[2], t[3]);
    if tm.det().norm() < 1e-12 {
        return Err(KleinianError::Singular);
    }
    Ok(tm.normalized())
}

fn gauss3(mut m: [[C; 4]; 3]) -> Option<[C; 3]> {
    for col in 0..3 {
        let piv = (col..3).max_by(|a, b| m[*a][col].norm().total_cmp(&m[*b][col].norm()))?;
        if m[piv][col].norm() < 1e-300 {
            return None;
        }
        m.swap(col, piv);
        #[allow(clippy::needless_range_loop)]
        for r in 0..3 {
            if r != col {
                let f = m[r][col] / m[col][col];
                for c in col..4 {
                    let v = m[col][c];
                    m[r][c] -= f * v;
                }
            }
        }
    }
    Some([m[0][3] / m[0][0], m[1][3] / m[1][1], m[2][3] / m[2][2]])
}

impl GroupRep {
    pub fn commutator_trace(&self) -> C {
        (self.a * self.b * self.a.inverse() * self.b.inverse()).trace()
    }

    /// Residuals of T A T^-1 = AB and T B T^-1 = BAB.
    pub fn relation_residuals(&self) -> (f64, f64) {
        let ti = self.t.inverse();
        let r1 = (self.t * self.a * ti).dist_projective(&(self.a * self.b));
        let r2 = (self.t * self.b * ti).dist_projective(&(self.b * self.a * self.b));
        (r1, r2)
    }

    pub fn generator(&self, l: Letter) -> Mobius {
        match l {
            Letter::A => self.a,
            Letter::B => self.b,
            Letter::AInv => self.a.inverse(),
            Letter::BInv => self.b.inverse(),
        }
    }

    pub fn base_point(&self) -> Result<C, KleinianError> {
        self.t.attracting_fixed_point().ok_or(KleinianError::NoAttractingFixedPoint)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Letter {
    A,
    B,
    AInv,
    BInv,
}

impl Letter {
    pub fn inverse(self) -> Letter {
        match self {
            Letter::A => Letter::AInv,
            Letter::AInv => Letter::A,
            Letter::B => Letter::BInv,
            Letter::BInv => Letter::B,
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Letter::A => 'a',
            Letter::B => 'b',
            Letter::AInv => 'A',
            Letter::BInv => 'B',
        }
    }
}

/// Freely reduced word in a, b and their inverses (written A, B).
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn reduce(letters: impl IntoIterator<Item = Letter>) -> Word {
        let mut st: Vec<Letter> = Vec::new();
        for l in letters {
            if st.last() == Some(&l.inverse()) {
                st.pop();
            } else {
                st.push(l);
            }
        }
        Word(st)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Applies a substitution given on a and b; inverses map to reversed inverses.
    pub fn substitute(&self, on_a: &[Letter], on_b: &[Letter]) -> Word {
        let inv = |w: &[Letter]| w.iter().rev().map(|l| l.inverse()).collect::<Vec<_>>();
        Word::reduce(self.0.iter().flat_map(|l| match l {
            Letter::A => on_a.to_vec(),
            Letter::B => on_b.to_vec(),
            Letter::AInv => inv(on_a),
            Letter::BInv => inv(on_b),
        }))
    }

    /// The monodromy a -> ab, b -> bab.
    pub fn phi(&self) -> Word {
        self.substitute(&[Letter::A, Letter::B], &[Letter::B, Letter::A, Letter::B])
    }

    pub fn phi_inverse(&self) -> Word {
        self.substitute(&[Letter::A, Letter::A, Letter::BInv], &[Letter::B, Letter::AInv])
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            write!(f, "{}", l.to_char())?;
        }
        Ok(())
    }
}

/// w_m = phi^{-m}(a), which represents t^{-m} a t^m.
pub fn inverse_monodromy_word(m: u32) -> Word {
    let mut w = Word(vec![Letter::A]);
    for _ in 0..m {
        w = w.phi_inverse();
    }
    w
}

/// Images of the base point p under T^m w_m(i) for all prefixes w_m(i):
/// starts at p and ends at A p.
pub fn lightning_polyline(rep: &GroupRep, m: u32) -> Result<Vec<C>, KleinianError> {
    let p = rep.base_point()?;
    let w = inverse_monodromy_word(m);
    let mut g = rep.t.pow(m);
    let mut pts = Vec::with_capacity(w.len() + 1);
    pts.push(g.apply(p));
    for l in &w.0 {
        g = (g * rep.generator(*l)).renormalized();
        pts.push(g.apply(p));
    }
    Ok(pts)
}

/// Smallest m whose polyline has all steps below `eps`, up to `max_m`.
pub fn choose_m(rep: &GroupRep, eps: f64, max_m: u32) -> Result<u32, KleinianError> {
    for m in 0..=max_m {
        let pts = lightning_polyline(rep, m)?;
        if pts.windows(2).all(|w| (w[1] - w[0]).norm() < eps) {
            return Ok(m);
        }
    }
    Ok(max_m)
}

/// Lightning curve refined only where needed: a letter l after prefix g is
/// replaced by t followed by phi^{-1}(l) while the step g p -> g l p is at
/// least `tol` long.  Both endpoints match the fixed-m polyline.
pub fn lightning_adaptive(rep: &GroupRep, tol: f64, max_depth: usize) -> Result<Vec<C>, KleinianError> {
    let p = rep.base_point()?;
    let expand = |l: Letter| -> Vec<Letter> {
        match l {
            Letter::A => vec![Letter::A, Letter::A, Letter::BInv],
            Letter::B => vec![Letter::B, Letter::AInv],
            Letter::AInv => vec![Letter::B, Letter::AInv, Letter::AInv],
            Letter::BInv => vec![Letter::A, Letter::BInv],
        }
    };
    let mut pts = vec![p];
    // Explicit stack of (prefix, letter, depth), processed in word order.
    let mut stack: Vec<(Mobius, Letter, usize)> = vec![(Mobius::identity(), Letter::A, 0)];
    while let Some((g, l, depth)) = stack.pop() {
        let q0 = g.apply(p);
        let q1 = (g * rep.generator(l)).apply(p);
        if (q1 - q0).norm() < tol || depth >= max_depth {
            pts.push(q1);
            continue;
        }
        let mut h = (g * rep.t).normalized();
        let mut children = Vec::with_capacity(3);
        for c in expand(l) {
            children.push((h, c, depth + 1));
            h = h * rep.generator(c);
        }
        stack.extend(children.into_iter().rev());
    }
    Ok(pts)
}

pub struct LightningDimension {
    pub rep: GroupRep,
    pub m: u32,
    pub points: Vec<Pt>,
    pub estimate: DimensionEstimate,
}

/// Full pipeline for one n: solve, pick m so steps fall below `eps`, then
/// regress coarsened length over scales from a quarter of the extent down to
/// `eps`, eight per decade.
pub fn lightning_dimension(n: u32, eps: f64, max_m: u32) -> Result<LightningDimension, KleinianError> {
    let rep = solve_representation(Some(n))?;
    let m = choose_m(&rep, eps, max_m)?;
    let points: Vec<Pt> = lightning_polyline(&rep, m)?.iter().map(|z| (z.re, z.im)).collect();
    let scales = geometric_scales(extent(&points) / 4.0, eps, 8);
    let estimate = estimate_dimension_length_regression(&points, &scales)?;
    Ok(LightningDimension { rep, m, points, estimate })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cusped_limit_closed_form() {
        let r = solve_representation(None).unwrap();
        let x = r.traces.0;
        assert!((x * x - x * 3.0 + 3.0).norm() < 1e-12);
        assert!((r.commutator_trace() + 2.0).norm() < 1e-9);
    }

    #[test]
    fn trace_identities_and_relations() {
        for n in [2u32, 3, 5, 8] {
            let r = solve_representation(Some(n)).unwrap();
            let (x, y, z) = r.traces;
            assert!((r.a.trace() - x).norm() < 1e-9);
            assert!((r.b.trace() - y).norm() < 1e-9);
            assert!(((r.a * r.b).trace() - z).norm() < 1e-9);
            let markov = x * x + y * y + z * z - x * y * z - 2.0;
            assert!((r.commutator_trace() - markov).norm() < 1e-9);
            assert!((r.commutator_trace() - kappa(Some(n))).norm() < 1e-9);
            let (r1, r2) = r.relation_residuals();
            assert!(r1 < 1e-9 && r2 < 1e-9, "{r1} {r2}");
            assert!(!r.branch_jump);
            assert!((r.t.det() - 1.0).norm() < 1e-12);
        }
    }

    #[test]
    fn words() {
        assert_eq!(inverse_monodromy_word(0).to_string(), "a");
        assert_eq!(inverse_monodromy_word(1).to_string(), "aaB");
        for m in 0..=6 {
            let mut w = inverse_monodromy_word(m);
            for _ in 0..m {
                w = w.phi();
            }
            assert_eq!(w.to_string(), "a");
        }
        let l: Vec<f64> = (8..12).map(|m| inverse_monodromy_word(m).len() as f64).collect();
        let golden = (3.0 + 5f64.sqrt()) / 2.0;
        assert!((l[3] / l[2] - golden).abs() < 0.01);
    }

    #[test]
    fn polyline_endpoints() {
        let r = solve_representation(Some(3)).unwrap();
        let p = r.base_point().unwrap();
        let pts = lightning_polyline(&r, 5).unwrap();
        assert_eq!(pts.len(), inverse_monodromy_word(5).len() + 1);
        assert!((pts[0] - p).norm() < 1e-9);
        assert!((pts[pts.len() - 1] - r.a.apply(p)).norm() < 1e-9);
        let ad = lightning_adaptive(&r, 1e-2, 40).unwrap();
        assert!((ad[0] - p).norm() < 1e-12);
        assert!((ad[ad.len() - 1] - r.a.apply(p)).norm() < 1e-9);
    }
}

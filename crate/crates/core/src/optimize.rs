//! Limited-memory BFGS with a strong Wolfe line search.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LbfgsOptions {
    /// Stop once the gradient infinity norm is at most this.
    pub gtol: f64,
    /// Objective evaluation budget, line-search evaluations included.
    pub max_evals: usize,
    /// Number of stored curvature pairs.
    pub memory: usize,
}

impl Default for LbfgsOptions {
    fn default() -> Self {
        LbfgsOptions {
            gtol: 1e-10,
            max_evals: 10_000,
            memory: 10,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LbfgsStatus {
    Converged,
    EvalBudget,
    /// No further decrease could be found; usually round-off near a
    /// minimum.
    LineSearchFailed,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LbfgsResult {
    /// Best point seen.
    pub x: Vec<f64>,
    pub f: f64,
    pub grad: Vec<f64>,
    pub evals: usize,
    pub iterations: usize,
    pub status: LbfgsStatus,
}

impl LbfgsResult {
    pub fn grad_norm(&self) -> f64 {
        inf_norm(&self.grad)
    }
}

const C1: f64 = 1e-4;
const C2: f64 = 0.9;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

#[derive(Clone)]
struct Point {
    alpha: f64,
    f: f64,
    g: Vec<f64>,
    slope: f64,
}

struct Evaluator<F> {
    func: F,
    evals: usize,
    max_evals: usize,
    best: Option<(Vec<f64>, f64, Vec<f64>)>,
}

impl<F> Evaluator<F>
where
    F: FnMut(&[f64]) -> Result<(f64, Vec<f64>)>,
{
    fn eval(&mut self, x: &[f64]) -> Result<(f64, Vec<f64>)> {
        self.evals += 1;
        let (f, g) = (self.func)(x)?;
        if !f.is_finite() || g.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        if self.best.as_ref().is_none_or(|b| f < b.1) {
            self.best = Some((x.to_vec(), f, g.clone()));
        }
        Ok((f, g))
    }

    fn exhausted(&self) -> bool {
        self.evals >= self.max_evals
    }

    fn at(&mut self, x: &[f64], d: &[f64], alpha: f64) -> Result<Point> {
        let trial: Vec<f64> = x.iter().zip(d).map(|(xi, di)| xi + alpha * di).collect();
        let (f, g) = self.eval(&trial)?;
        let slope = dot(&g, d);
        Ok(Point { alpha, f, g, slope })
    }
}

fn cubic_min(a: &Point, b: &Point) -> Option<f64> {
    let d1 = a.slope + b.slope - 3.0 * (a.f - b.f) / (a.alpha - b.alpha);
    let disc = d1 * d1 - a.slope * b.slope;
    if disc < 0.0 {
        return None;
    }
    let d2 = (b.alpha - a.alpha).signum() * disc.sqrt();
    let t = b.alpha - (b.alpha - a.alpha) * (b.slope + d2 - d1) / (b.slope - a.slope + 2.0 * d2);
    t.is_finite().then_some(t)
}

enum Search {
    Found(Point),
    /// Armijo holds at this point but curvature could not be satisfied.
    Weak(Point),
    Failed,
}

fn zoom<F>(
    ev: &mut Evaluator<F>,
    x: &[f64],
    d: &[f64],
    start: &Point,
    mut lo: Point,
    mut hi: Point,
) -> Result<Search>
where
    F: FnMut(&[f64]) -> Result<(f64, Vec<f64>)>,
{
    for _ in 0..40 {
        if ev.exhausted() {
            break;
        }
        let (a, b) = (lo.alpha.min(hi.alpha), lo.alpha.max(hi.alpha));
        let width = b - a;
        if width <= f64::EPSILON * b.max(1e-300) {
            break;
        }
        let mut t = cubic_min(&lo, &hi).unwrap_or(0.5 * (a + b));
        if !(t > a + 0.1 * width && t < b - 0.1 * width) {
            t = 0.5 * (a + b);
        }
        let p = ev.at(x, d, t)?;
        if p.f > start.f + C1 * t * start.slope || p.f >= lo.f {
            hi = p;
        } else {
            if p.slope.abs() <= -C2 * start.slope {
                return Ok(Search::Found(p));
            }
            if p.slope * (hi.alpha - lo.alpha) >= 0.0 {
                hi = lo;
            }
            lo = p;
        }
    }
    if lo.alpha > 0.0 && lo.f < start.f {
        Ok(Search::Weak(lo))
    } else {
        Ok(Search::Failed)
    }
}

fn line_search<F>(ev: &mut Evaluator<F>, x: &[f64], d: &[f64], start: &Point, alpha0: f64) -> Result<Search>
where
    F: FnMut(&[f64]) -> Result<(f64, Vec<f64>)>,
{
    let mut prev = start.clone();
    let mut alpha = alpha0;
    for i in 0..60 {
        if ev.exhausted() {
            break;
        }
        let p = ev.at(x, d, alpha)?;
        if p.f > start.f + C1 * alpha * start.slope || (i > 0 && p.f >= prev.f) {
            return zoom(ev, x, d, start, prev, p);
        }
        if p.slope.abs() <= -C2 * start.slope {
            return Ok(Search::Found(p));
        }
        if p.slope >= 0.0 {
            return zoom(ev, x, d, start, p, prev);
        }
        prev = p;
        alpha *= 2.0;
    }
    if prev.alpha > 0.0 && prev.f < start.f {
        Ok(Search::Weak(prev))
    } else {
        Ok(Search::Failed)
    }
}

/// Minimizes `func`, which returns the value and gradient at a point.
///
/// The returned point is the best one evaluated, so its value never exceeds
/// the value at `x0`.
pub fn minimize<F>(func: F, x0: &[f64], opts: &LbfgsOptions) -> Result<LbfgsResult>
where
    F: FnMut(&[f64]) -> Result<(f64, Vec<f64>)>,
{
    let mut ev = Evaluator {
        func,
        evals: 0,
        max_evals: opts.max_evals.max(1),
        best: None,
    };
    let mut x = x0.to_vec();
    let (mut f, mut g) = ev.eval(&x)?;
    let mut s_hist: Vec<Vec<f64>> = Vec::new();
    let mut y_hist: Vec<Vec<f64>> = Vec::new();
    let mut iterations = 0;

    let status = loop {
        if inf_norm(&g) <= opts.gtol {
            break LbfgsStatus::Converged;
        }
        if ev.exhausted() {
            break LbfgsStatus::EvalBudget;
        }
        let mut d = two_loop(&g, &s_hist, &y_hist);
        let mut slope = dot(&g, &d);
        if !(slope < 0.0) {
            s_hist.clear();
            y_hist.clear();
            d = g.iter().map(|v| -v).collect();
            slope = dot(&g, &d);
        }
        let alpha0 = if s_hist.is_empty() {
            (1.0 / inf_norm(&g)).min(1.0)
        } else {
            1.0
        };
        let start = Point {
            alpha: 0.0,
            f,
            g: g.clone(),
            slope,
        };
        let step = match line_search(&mut ev, &x, &d, &start, alpha0)? {
            Search::Found(p) | Search::Weak(p) => p,
            Search::Failed if !s_hist.is_empty() => {
                s_hist.clear();
                y_hist.clear();
                continue;
            }
            Search::Failed => {
                break if ev.exhausted() {
                    LbfgsStatus::EvalBudget
                } else {
                    LbfgsStatus::LineSearchFailed
                };
            }
        };
        let p = step;
        iterations += 1;
        let s: Vec<f64> = d.iter().map(|di| p.alpha * di).collect();
        let y: Vec<f64> = p.g.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-12 * dot(&y, &y).sqrt() * dot(&s, &s).sqrt() {
            if s_hist.len() == opts.memory.max(1) {
                s_hist.remove(0);
                y_hist.remove(0);
            }
            s_hist.push(s.clone());
            y_hist.push(y);
        }
        for (xi, si) in x.iter_mut().zip(&s) {
            *xi += si;
        }
        f = p.f;
        g = p.g;
    };

    let (bx, bf, bg) = ev.best.take().expect("at least one evaluation");
    Ok(LbfgsResult {
        x: bx,
        f: bf,
        grad: bg,
        evals: ev.evals,
        iterations,
        status,
    })
}

fn two_loop(g: &[f64], s_hist: &[Vec<f64>], y_hist: &[Vec<f64>]) -> Vec<f64> {
    let mut q: Vec<f64> = g.to_vec();
    let m = s_hist.len();
    let mut alphas = vec![0.0; m];
    let rho: Vec<f64> = (0..m).map(|i| 1.0 / dot(&y_hist[i], &s_hist[i])).collect();
    for i in (0..m).rev() {
        alphas[i] = rho[i] * dot(&s_hist[i], &q);
        for (qj, yj) in q.iter_mut().zip(&y_hist[i]) {
            *qj -= alphas[i] * yj;
        }
    }
    if let (Some(s), Some(y)) = (s_hist.last(), y_hist.last()) {
        let gamma = dot(s, y) / dot(y, y);
        q.iter_mut().for_each(|v| *v *= gamma);
    }
    for i in 0..m {
        let beta = rho[i] * dot(&y_hist[i], &q);
        for (qj, sj) in q.iter_mut().zip(&s_hist[i]) {
            *qj += (alphas[i] - beta) * sj;
        }
    }
    q.iter_mut().for_each(|v| *v = -*v);
    q
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rosenbrock() {
        let f = |x: &[f64]| -> Result<(f64, Vec<f64>)> {
            let (a, b) = (x[0], x[1]);
            let v = (1.0 - a).powi(2) + 100.0 * (b - a * a).powi(2);
            let g = vec![
                -2.0 * (1.0 - a) - 400.0 * a * (b - a * a),
                200.0 * (b - a * a),
            ];
            Ok((v, g))
        };
        let r = minimize(f, &[-1.2, 1.0], &LbfgsOptions::default()).unwrap();
        assert!((r.x[0] - 1.0).abs() < 1e-8, "{r:?}");
        assert!((r.x[1] - 1.0).abs() < 1e-8);
    }

    #[test]
    fn cos_two_theta() {
        let f = |x: &[f64]| -> Result<(f64, Vec<f64>)> { Ok(((2.0 * x[0]).cos(), vec![-2.0 * (2.0 * x[0]).sin()])) };
        let r = minimize(f, &[0.1], &LbfgsOptions::default()).unwrap();
        assert!((r.f + 1.0).abs() < 1e-14);
        assert!((r.x[0] - std::f64::consts::FRAC_PI_2).abs() < 1e-7);
    }

    #[test]
    fn already_optimal() {
        let f = |x: &[f64]| -> Result<(f64, Vec<f64>)> { Ok((x[0] * x[0], vec![2.0 * x[0]])) };
        let r = minimize(f, &[0.0], &LbfgsOptions::default()).unwrap();
        assert_eq!(r.x, vec![0.0]);
        assert_eq!(r.evals, 1);
        assert_eq!(r.status, LbfgsStatus::Converged);
    }

    #[test]
    fn non_finite_is_an_error() {
        let f = |_: &[f64]| -> Result<(f64, Vec<f64>)> { Ok((f64::NAN, vec![0.0])) };
        assert!(matches!(
            minimize(f, &[0.0], &LbfgsOptions::default()),
            Err(Error::NonFinite)
        ));
    }
}

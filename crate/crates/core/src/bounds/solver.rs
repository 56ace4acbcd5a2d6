//! Concave maximization over the capped simplex `{a >= 0, sum(a) <= cap}`.

/// A smooth concave function of the duty allocation.
pub trait ConcaveObjective {
    fn dim(&self) -> usize;
    fn value(&self, a: &[f64]) -> f64;
    fn gradient(&self, a: &[f64], out: &mut [f64]);
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Stop once the projected-gradient step moves the iterate by less than this (max-norm).
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 10_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub argmax: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Euclidean projection onto `{a >= 0, sum(a) <= cap}`.
pub fn project_capped_simplex(v: &[f64], cap: f64) -> Vec<f64> {
    let clipped: Vec<f64> = v.iter().map(|x| x.max(0.0)).collect();
    if clipped.iter().sum::<f64>() <= cap {
        return clipped;
    }
    // sort-based projection onto the face sum(a) = cap
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut cumsum = 0.0;
    let mut theta = 0.0;
    for (j, &uj) in u.iter().enumerate() {
        cumsum += uj;
        let t = (cumsum - cap) / (j + 1) as f64;
        if uj - t > 0.0 {
            theta = t;
        } else {
            break;
        }
    }
    v.iter().map(|x| (x - theta).max(0.0)).collect()
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

const ARMIJO: f64 = 1e-4;

/// Projected gradient ascent with Armijo backtracking and step doubling.
pub fn maximize<O: ConcaveObjective + ?Sized>(obj: &O, cap: f64, opts: SolverOptions) -> Solution {
    let n = obj.dim();
    let mut x = vec![cap / (n + 1) as f64; n];
    let mut f = obj.value(&x);
    let mut g = vec![0.0; n];
    obj.gradient(&x, &mut g);

    let gmax = g.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if gmax == 0.0 {
        return Solution {
            argmax: x,
            value: f,
            iterations: 0,
            converged: true,
        };
    }
    // first trial step moves by about one unit of allocation
    let mut t = 1.0 / gmax;

    for iter in 0..opts.max_iter {
        let mut first = true;
        loop {
            let trial: Vec<f64> = x.iter().zip(&g).map(|(xi, gi)| xi + t * gi).collect();
            let next = project_capped_simplex(&trial, cap);
            let step = max_abs_diff(&next, &x);
            if first && step < opts.tol {
                return Solution {
                    argmax: x,
                    value: f,
                    iterations: iter,
                    converged: true,
                };
            }
            first = false;
            let f_next = obj.value(&next);
            let ascent: f64 = g.iter().zip(next.iter().zip(&x)).map(|(gi, (a, b))| gi * (a - b)).sum();
            if f_next >= f + ARMIJO * ascent {
                x = next;
                f = f_next;
                obj.gradient(&x, &mut g);
                t *= 2.0;
                break;
            }
            t *= 0.5;
            // re-projecting a point on the face can move it by rounding noise
            // forever, so stop once backtracking is below the resolution
            if step < opts.tol || t == 0.0 {
                return Solution {
                    argmax: x,
                    value: f,
                    iterations: iter,
                    converged: true,
                };
            }
        }
    }
    Solution {
        argmax: x,
        value: f,
        iterations: opts.max_iter,
        converged: false,
    }
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for the maximum of a concave function on `[lo, hi]`.
/// Returns `(argmax, value)`.
pub fn golden_max(f: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    if hi <= lo {
        return (lo, f(lo));
    }
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > tol {
        if fc < fd {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        } else {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        }
    }
    let mid = 0.5 * (a + b);
    [(lo, f(lo)), (hi, f(hi)), (mid, f(mid))]
        .into_iter()
        .fold(
            (mid, f64::NEG_INFINITY),
            |best, cur| if cur.1 > best.1 { cur } else { best },
        )
}

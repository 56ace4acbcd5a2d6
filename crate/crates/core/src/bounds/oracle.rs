//! Brute-force maximization over a uniform grid on `A(beta)`, used to check the solver.

use crate::channel::{check_beta, MimoChannelSpec};
use crate::error::{param, Error, Result};

use super::objective::{SumLimitObjective, SumUpperObjective};
use super::solver::ConcaveObjective;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleObjective {
    SumUpper,
    SumLimit,
}

/// Grids with more points than this switch to an exact hill climb along the
/// last axis (valid because the objective is concave).
const FULL_SCAN_LIMIT: u64 = 20_000_000;

/// Maximum of the selected objective over `{a = i / (resolution * beta) : i in N^nt, sum(i) <= resolution}`.
pub fn grid_oracle(
    spec: &MimoChannelSpec,
    objective: OracleObjective,
    rho: f64,
    beta: f64,
    resolution: usize,
    quad_points: usize,
) -> Result<f64> {
    check_beta(beta)?;
    if resolution == 0 {
        return Err(param("resolution", "must be positive"));
    }
    let nt = spec.nt();
    if nt > 3 {
        return Err(Error::OracleDimension(nt));
    }
    let obj: Box<dyn ConcaveObjective> = match objective {
        OracleObjective::SumUpper => Box::new(SumUpperObjective::new(spec, rho, quad_points)?),
        OracleObjective::SumLimit => Box::new(SumLimitObjective::new(spec)),
    };
    Ok(scan(obj.as_ref(), nt, resolution, 1.0 / (beta * resolution as f64)))
}

fn scan(obj: &dyn ConcaveObjective, nt: usize, res: usize, h: f64) -> f64 {
    let mut best = f64::NEG_INFINITY;
    let mut a = vec![0.0; nt];
    match nt {
        1 => {
            for i in 0..=res {
                a[0] = i as f64 * h;
                best = best.max(obj.value(&a));
            }
        }
        2 => {
            for i in 0..=res {
                a[0] = i as f64 * h;
                for j in 0..=res - i {
                    a[1] = j as f64 * h;
                    best = best.max(obj.value(&a));
                }
            }
        }
        _ => {
            let r = res as u64 + 1;
            let full = r * (r + 1) * (r + 2) / 6 <= FULL_SCAN_LIMIT;
            for i in 0..=res {
                a[0] = i as f64 * h;
                // the maximizer moves little between neighbouring rows
                let mut start = 0;
                for j in 0..=res - i {
                    a[1] = j as f64 * h;
                    let top = res - i - j;
                    let mut at = |m: usize| {
                        a[2] = m as f64 * h;
                        obj.value(&a)
                    };
                    let v = if full {
                        (0..=top).map(&mut at).fold(f64::NEG_INFINITY, f64::max)
                    } else {
                        let (m, v) = integer_concave_max(&mut at, top, start);
                        start = m;
                        v
                    };
                    best = best.max(v);
                }
            }
        }
    }
    best
}

/// Maximum over `0..=top` of a concave sequence and its position, by
/// climbing from `start`. A local maximum of a concave sequence is global.
fn integer_concave_max(f: &mut impl FnMut(usize) -> f64, top: usize, start: usize) -> (usize, f64) {
    let mut m = start.min(top);
    let mut v = f(m);
    while m < top {
        let up = f(m + 1);
        if up <= v {
            break;
        }
        m += 1;
        v = up;
    }
    while m > 0 {
        let down = f(m - 1);
        if down <= v {
            break;
        }
        m -= 1;
        v = down;
    }
    (m, v)
}

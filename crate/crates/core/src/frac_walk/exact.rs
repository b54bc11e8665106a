use std::collections::HashMap;

use super::transition::TransitionMatrixP;
use crate::error::{domain, Result};
use crate::frac_fd::{gl_coefficients, LatticeConfig, Scheme};
use crate::scalar::Real;

/// Largest lattice accepted by [`exact_walk_law`].
pub const MAX_EXACT_NODES: usize = 16;
pub const MAX_EXACT_STEPS: usize = 8;

/// Exact law of the walker, by enumerating every event sequence.
///
/// Returns `law[n][i] = P(x(t_n) = i)` for node offsets `i = 0..M`, where
/// offset `M - 1` is the boundary node. Trajectories are kept in full, since
/// the revert events depend on the entire history.
pub fn exact_walk_law<T: Real>(beta: T, lat: &LatticeConfig<T>, scheme: Scheme) -> Result<Vec<Vec<T>>> {
    if lat.m > MAX_EXACT_NODES || lat.n > MAX_EXACT_STEPS {
        return domain(format!(
            "exact enumeration limited to M <= {MAX_EXACT_NODES}, N <= {MAX_EXACT_STEPS}"
        ));
    }
    let table = gl_coefficients(beta, lat.n.max(2) - 1)?;
    let p = TransitionMatrixP::new(lat.m, lat.mu);
    let last = lat.m - 1;

    let mut paths: HashMap<Vec<usize>, T> = HashMap::new();
    paths.insert(vec![0], T::one());
    let mut law = vec![marginal(&paths, lat.m)];

    for n in 0..lat.n - 1 {
        let mut next: HashMap<Vec<usize>, T> = HashMap::new();
        let mut push = |path: &Vec<usize>, to: usize, w: T| {
            if w > T::zero() {
                let mut ext = path.clone();
                ext.push(to);
                let e = next.entry(ext).or_insert_with(T::zero);
                *e = *e + w;
            }
        };
        for (path, &prob) in &paths {
            for h in 0..=n {
                let weight = if h == 0 { table.b(n) } else { table.c(n + 1 - h) };
                let base = path[h];
                match scheme {
                    Scheme::Explicit if h == n => {
                        push(path, base, prob * (weight - lat.mu));
                        push(path, (base + 1).min(last), prob * lat.mu);
                    }
                    Scheme::Explicit => push(path, base, prob * weight),
                    Scheme::Implicit => {
                        for (to, &pt) in p.row(base).iter().enumerate().skip(base) {
                            push(path, to, prob * weight * pt);
                        }
                    }
                }
            }
        }
        paths = next;
        law.push(marginal(&paths, lat.m));
    }
    Ok(law)
}

fn marginal<T: Real>(paths: &HashMap<Vec<usize>, T>, m: usize) -> Vec<T> {
    let mut out = vec![T::zero(); m];
    for (path, &p) in paths {
        let i = *path.last().expect("nonempty path");
        out[i] = out[i] + p;
    }
    out
}

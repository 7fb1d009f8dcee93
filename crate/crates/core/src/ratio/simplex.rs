//! Nelder–Mead downhill simplex.

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

#[derive(Debug, Clone)]
pub(crate) struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub evaluations: usize,
}

/// Minimizes `f` from the axis-aligned simplex of edge `step` at `x0`.
///
/// Stops after `max_iterations` or once every vertex lies within `size_tol` of the best one.
pub(crate) fn minimize<F>(mut f: F, x0: &[f64], step: f64, max_iterations: usize, size_tol: f64) -> Minimum
where
    F: FnMut(&[f64]) -> f64,
{
    let dim = x0.len();
    let mut evaluations = 0;
    let mut eval = |x: &[f64]| {
        evaluations += 1;
        let v = f(x);
        if v.is_nan() { f64::INFINITY } else { v }
    };
    if dim == 0 {
        let value = eval(x0);
        return Minimum { x: x0.to_vec(), value, iterations: 0, evaluations };
    }

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
    simplex.push((x0.to_vec(), eval(x0)));
    for i in 0..dim {
        let mut x = x0.to_vec();
        x[i] += step;
        let v = eval(&x);
        simplex.push((x, v));
    }

    let mut iterations = 0;
    while iterations < max_iterations {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let spread = simplex[1..]
            .iter()
            .map(|(x, _)| x.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
            .fold(0.0, f64::max);
        if spread < size_tol {
            break;
        }
        iterations += 1;

        let mut centroid = vec![0.0; dim];
        for (x, _) in &simplex[..dim] {
            for (c, xi) in centroid.iter_mut().zip(x) {
                *c += xi / dim as f64;
            }
        }
        let along = |t: f64, worst: &[f64]| -> Vec<f64> {
            centroid.iter().zip(worst).map(|(c, w)| c + t * (c - w)).collect()
        };
        let worst = simplex[dim].0.clone();
        let (best_v, second_worst_v, worst_v) = (simplex[0].1, simplex[dim - 1].1, simplex[dim].1);

        let xr = along(REFLECT, &worst);
        let vr = eval(&xr);
        if vr < best_v {
            let xe = along(REFLECT * EXPAND, &worst);
            let ve = eval(&xe);
            simplex[dim] = if ve < vr { (xe, ve) } else { (xr, vr) };
            continue;
        }
        if vr < second_worst_v {
            simplex[dim] = (xr, vr);
            continue;
        }
        let (xc, vc) = if vr < worst_v {
            let xc = along(REFLECT * CONTRACT, &worst);
            let vc = eval(&xc);
            (xc, vc)
        } else {
            let xc = along(-CONTRACT, &worst);
            let vc = eval(&xc);
            (xc, vc)
        };
        if vc < vr.min(worst_v) {
            simplex[dim] = (xc, vc);
            continue;
        }
        let best = simplex[0].0.clone();
        for (x, v) in simplex.iter_mut().skip(1) {
            for (xi, bi) in x.iter_mut().zip(&best) {
                *xi = bi + SHRINK * (*xi - bi);
            }
            *v = eval(x);
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, value) = simplex.swap_remove(0);
    Minimum { x, value, iterations, evaluations }
}

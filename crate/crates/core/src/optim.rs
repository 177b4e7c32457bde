//! Derivative-free minimization (Nelder–Mead downhill simplex).

/// Nelder–Mead with the dimension-adaptive coefficients of Gao & Han, which
/// behave much better than the textbook (1, 2, 1/2, 1/2) set beyond ~5
/// parameters.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct NelderMead {
    pub max_evals: usize,
    /// Stop when the spread of function values over the simplex drops below this.
    pub f_tol: f64,
    /// ... and the simplex diameter (max-norm) drops below this.
    pub x_tol: f64,
    /// Edge length of the initial simplex.
    pub initial_step: f64,
}

impl Default for NelderMead {
    fn default() -> Self {
        NelderMead {
            max_evals: 5000,
            f_tol: 1e-10,
            x_tol: 1e-8,
            initial_step: 0.2,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub f: f64,
    pub evals: usize,
    pub converged: bool,
}

impl NelderMead {
    pub fn minimize<F: FnMut(&[f64]) -> f64>(&self, mut f: F, x0: &[f64]) -> Minimum {
        let n = x0.len();
        assert!(n > 0, "need at least one parameter");
        let nf = n as f64;
        let (alpha, beta, gamma, delta) = if n >= 2 {
            (1.0, 1.0 + 2.0 / nf, 0.75 - 0.5 / nf, 1.0 - 1.0 / nf)
        } else {
            (1.0, 2.0, 0.5, 0.5)
        };

        let mut evals = 0usize;
        let mut eval = |x: &[f64], evals: &mut usize| {
            *evals += 1;
            let v = f(x);
            if v.is_nan() {
                f64::INFINITY
            } else {
                v
            }
        };

        let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
        simplex.push(x0.to_vec());
        for i in 0..n {
            let mut v = x0.to_vec();
            v[i] += self.initial_step;
            simplex.push(v);
        }
        let mut values: Vec<f64> = simplex.iter().map(|v| eval(v, &mut evals)).collect();

        let mut converged = false;
        let mut order: Vec<usize> = (0..=n).collect();
        while evals < self.max_evals {
            order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
            let best = order[0];
            let worst = order[n];
            let second_worst = order[n - 1];

            let f_spread = values[worst] - values[best];
            let x_spread = simplex
                .iter()
                .map(|v| {
                    v.iter()
                        .zip(&simplex[best])
                        .map(|(a, b)| (a - b).abs())
                        .fold(0.0, f64::max)
                })
                .fold(0.0, f64::max);
            if f_spread <= self.f_tol && x_spread <= self.x_tol {
                converged = true;
                break;
            }

            let mut centroid = vec![0.0; n];
            for &i in order.iter().take(n) {
                for (c, x) in centroid.iter_mut().zip(&simplex[i]) {
                    *c += x / nf;
                }
            }
            let along = |t: f64| -> Vec<f64> {
                centroid
                    .iter()
                    .zip(&simplex[worst])
                    .map(|(c, w)| c + t * (c - w))
                    .collect()
            };

            let xr = along(alpha);
            let fr = eval(&xr, &mut evals);
            if fr < values[best] {
                let xe = along(alpha * beta);
                let fe = eval(&xe, &mut evals);
                if fe < fr {
                    simplex[worst] = xe;
                    values[worst] = fe;
                } else {
                    simplex[worst] = xr;
                    values[worst] = fr;
                }
                continue;
            }
            if fr < values[second_worst] {
                simplex[worst] = xr;
                values[worst] = fr;
                continue;
            }
            let (xc, fc) = if fr < values[worst] {
                let xc = along(alpha * gamma);
                let fc = eval(&xc, &mut evals);
                (xc, fc)
            } else {
                let xc = along(-gamma);
                let fc = eval(&xc, &mut evals);
                (xc, fc)
            };
            if fc < values[worst].min(fr) {
                simplex[worst] = xc;
                values[worst] = fc;
                continue;
            }
            // shrink toward the best vertex
            let xb = simplex[best].clone();
            for &i in order.iter().skip(1) {
                for (x, b) in simplex[i].iter_mut().zip(&xb) {
                    *x = b + delta * (*x - b);
                }
                values[i] = eval(&simplex[i], &mut evals);
            }
        }

        let best = (0..=n)
            .min_by(|&a, &b| values[a].total_cmp(&values[b]))
            .unwrap();
        Minimum {
            x: simplex[best].clone(),
            f: values[best],
            evals,
            converged,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_bowl() {
        let nm = NelderMead::default();
        let m = nm.minimize(
            |x| (x[0] - 1.0).powi(2) + 3.0 * (x[1] + 2.0).powi(2) + 0.5 * x[2].powi(2),
            &[0.0, 0.0, 0.0],
        );
        assert!(m.converged);
        assert!((m.x[0] - 1.0).abs() < 1e-6);
        assert!((m.x[1] + 2.0).abs() < 1e-6);
        assert!(m.f < 1e-10);
    }

    #[test]
    fn rosenbrock() {
        let nm = NelderMead {
            max_evals: 20_000,
            ..Default::default()
        };
        let m = nm.minimize(
            |x| 100.0 * (x[1] - x[0] * x[0]).powi(2) + (1.0 - x[0]).powi(2),
            &[-1.2, 1.0],
        );
        assert!((m.x[0] - 1.0).abs() < 1e-5, "{:?}", m);
    }

    #[test]
    fn ten_dimensional_sphere_function() {
        let nm = NelderMead {
            max_evals: 40_000,
            ..Default::default()
        };
        let x0: Vec<f64> = (0..10).map(|i| 0.3 * i as f64 - 1.0).collect();
        let m = nm.minimize(|x| x.iter().map(|v| v * v).sum(), &x0);
        assert!(m.f < 1e-9, "{:?}", m);
    }

    #[test]
    fn respects_eval_budget() {
        let nm = NelderMead {
            max_evals: 50,
            ..Default::default()
        };
        let m = nm.minimize(|x| x[0].sin() + x[1].cos(), &[0.3, 0.1]);
        assert!(m.evals <= 50 + 3);
    }
}

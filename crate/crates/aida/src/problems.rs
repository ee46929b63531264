//! Benchmark problems: ten classic unconstrained test functions
//! (dimension 100) plus the scalar quadratic probe family `f(x) = (c/2) x^2`.
//!
//! Every problem carries an analytic objective and gradient, the canonical
//! initial point, and the known minimizer where one has a closed form. The
//! test-function formulas follow the extended-problem collection exactly as
//! printed there, including the unsquared first sums of `fun1` and `fun4`;
//! [`extended_himmelblau`] also offers the classical both-squared variant.

use crate::error::{Error, Result};

type ObjFn = Box<dyn Fn(&[f64]) -> f64 + Send + Sync>;
type GradFn = Box<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;

/// A named twice-differentiable objective with analytic gradient.
pub struct Problem {
    pub name: String,
    /// Dimension.
    pub n: usize,
    objective: ObjFn,
    gradient: GradFn,
    /// Canonical initial point.
    pub x0: Vec<f64>,
    /// Known minimizer, when available in closed form.
    pub xstar: Option<Vec<f64>>,
    /// Known Hessian spectrum at the optimum, when available in closed form.
    pub hessian_eigs_at_opt: Option<Vec<f64>>,
}

impl Problem {
    pub fn objective(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.n, "dimension mismatch for {}", self.name);
        (self.objective)(x)
    }

    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n, "dimension mismatch for {}", self.name);
        (self.gradient)(x)
    }
}

impl std::fmt::Debug for Problem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Problem")
            .field("name", &self.name)
            .field("n", &self.n)
            .finish()
    }
}

const N: usize = 100;

/// Quadratic probe `f(x) = (c/2) x^2` with curvature `c`.
pub fn quad(c: f64) -> Problem {
    Problem {
        name: "quad".into(),
        n: 1,
        objective: Box::new(move |x| 0.5 * c * x[0] * x[0]),
        gradient: Box::new(move |x| vec![c * x[0]]),
        x0: vec![1e-10],
        xstar: Some(vec![0.0]),
        hessian_eigs_at_opt: Some(vec![c]),
    }
}

/// Extended Himmelblau. The benchmark prints the first sum unsquared;
/// `classical = true` squares both terms as in the original function.
pub fn extended_himmelblau(classical: bool) -> Problem {
    let obj = move |x: &[f64]| {
        let mut total = 0.0;
        for k in (0..N).step_by(2) {
            let (a, b) = (x[k], x[k + 1]);
            let u = a * a + b - 11.0;
            let v = a + b * b - 7.0;
            total += if classical { u * u } else { u } + v * v;
        }
        total
    };
    let grad = move |x: &[f64]| {
        let mut g = vec![0.0; N];
        for k in (0..N).step_by(2) {
            let (a, b) = (x[k], x[k + 1]);
            let u = a * a + b - 11.0;
            let v = a + b * b - 7.0;
            if classical {
                g[k] = 4.0 * a * u + 2.0 * v;
                g[k + 1] = 2.0 * u + 4.0 * b * v;
            } else {
                g[k] = 2.0 * a + 2.0 * v;
                g[k + 1] = 1.0 + 4.0 * b * v;
            }
        }
        g
    };
    Problem {
        name: if classical {
            "fun1-classical".into()
        } else {
            "fun1".into()
        },
        n: N,
        objective: Box::new(obj),
        gradient: Box::new(grad),
        x0: vec![1.0; N],
        xstar: None,
        hessian_eigs_at_opt: None,
    }
}

fn extended_maratos() -> Problem {
    let obj = |x: &[f64]| {
        let mut total = 0.0;
        for k in (0..N).step_by(2) {
            let (a, b) = (x[k], x[k + 1]);
            let u = a + b * b - 1.0;
            total += a + 100.0 * u * u;
        }
        total
    };
    let grad = |x: &[f64]| {
        let mut g = vec![0.0; N];
        for k in (0..N).step_by(2) {
            let (a, b) = (x[k], x[k + 1]);
            let u = a + b * b - 1.0;
            g[k] = 1.0 + 200.0 * u;
            g[k + 1] = 400.0 * b * u;
        }
        g
    };
    // The printed initial point reads as the repeating pair (1.1, 0.1).
    let mut x0 = Vec::with_capacity(N);
    for _ in 0..N / 2 {
        x0.push(1.1);
        x0.push(0.1);
    }
    Problem {
        name: "fun2".into(),
        n: N,
        objective: Box::new(obj),
        gradient: Box::new(grad),
        x0,
        xstar: None,
        hessian_eigs_at_opt: None,
    }
}

fn quadratic_qf1() -> Problem {
    let obj = |x: &[f64]| {
        let mut total = 0.0;
        for (k, &xi) in x.iter().enumerate() {
            total += 0.5 * (k + 1) as f64 * xi * xi;
        }
        total - x[N - 1]
    };
    let grad = |x: &[f64]| {
        let mut g: Vec<f64> = x
            .iter()
            .enumerate()
            .map(|(k, &xi)| (k + 1) as f64 * xi)
            .collect();
        g[N - 1] -= 1.0;
        g
    };
    let mut xstar = vec![0.0; N];
    xstar[N - 1] = 1.0 / N as f64;
    Problem {
        name: "fun3".into(),
        n: N,
        objective: Box::new(obj),
        gradient: Box::new(grad),
        x0: vec![1.0; N],
        xstar: Some(xstar),
        hessian_eigs_at_opt: Some((1..=N).map(|k| k as f64).collect()),
    }
}

fn extended_bd1() -> Problem {
    let obj = |x: &[f64]| {
        let mut total = 0.0;
        for k in (0..N).step_by(2) {
            let (a, b) = (x[k], x[k + 1]);
            let u = a.exp() - b;
            total += a * a + b * b - 2.0 + u * u;
        }
        total
    };
    let grad = |x: &[f64]| {
        let mut g = vec![0.0; N];
        for k in (0..N).step_by(2) {
            let (a, b) = (x[k], x[k + 1]);
            let ea = a.exp();
            let u = ea - b;
            g[k] = 2.0 * a + 2.0 * u * ea;
            g[k + 1] = 2.0 * b - 2.0 * u;
        }
        g
    };
    Problem {
        name: "fun4".into(),
        n: N,
        objective: Box::new(obj),
        gradient: Box::new(grad),
        x0: vec![0.1; N],
        xstar: None,
        hessian_eigs_at_opt: None,
    }
}

fn tridia() -> Problem {
    let obj = |x: &[f64]| {
        let mut total = (x[0] - 1.0) * (x[0] - 1.0);
        for k in 1..N {
            let u = 2.0 * x[k] - x[k - 1];
            total += (k + 1) as f64 * u * u;
        }
        total
    };
    let grad = |x: &[f64]| {
        let mut g = vec![0.0; N];
        g[0] = 2.0 * (x[0] - 1.0);
        for k in 1..N {
            let u = 2.0 * x[k] - x[k - 1];
            let c = (k + 1) as f64;
            g[k] += 4.0 * c * u;
            g[k - 1] -= 2.0 * c * u;
        }
        g
    };
    let xstar: Vec<f64> = (0..N).map(|k| 0.5f64.powi(k as i32)).collect();
    Problem {
        name: "fun5".into(),
        n: N,
        objective: Box::new(obj),
        gradient: Box::new(grad),
        x0: vec![1.0; N],
        xstar: Some(xstar),
        hessian_eigs_at_opt: None,
    }
}

fn arwhead() -> Problem {
    let obj = |x: &[f64]| {
        let xn = x[N - 1];
        let mut total = 0.0;
        for &xi in &x[..N - 1] {
            let u = xi * xi + xn * xn;
            total += -4.0 * xi + 3.0 + u * u;
        }
        total
    };
    let grad = |x: &[f64]| {
        let xn = x[N - 1];
        let mut g = vec![0.0; N];
        let mut last = 0.0;
        for k in 0..N - 1 {
            let u = x[k] * x[k] + xn * xn;
            g[k] = -4.0 + 4.0 * x[k] * u;
            last += u;
        }
        g[N - 1] = 4.0 * xn * last;
        g
    };
    Problem {
        name: "fun6".into(),
        n: N,
        objective: Box::new(obj),
        gradient: Box::new(grad),
        x0: vec![1.0; N],
        xstar: None,
        hessian_eigs_at_opt: None,
    }
}

fn eg2() -> Problem {
    let obj = |x: &[f64]| {
        let mut total = 0.0;
        for &xi in &x[..N - 1] {
            total += (x[0] + xi * xi - 1.0).sin();
        }
        total + 0.5 * (x[N - 1] * x[N - 1]).sin()
    };
    let grad = |x: &[f64]| {
        let mut g = vec![0.0; N];
        for (k, &xi) in x[..N - 1].iter().enumerate() {
            let c = (x[0] + xi * xi - 1.0).cos();
            g[0] += c;
            g[k] += 2.0 * xi * c;
        }
        g[N - 1] += x[N - 1] * (x[N - 1] * x[N - 1]).cos();
        g
    };
    Problem {
        name: "fun7".into(),
        n: N,
        objective: Box::new(obj),
        gradient: Box::new(grad),
        x0: vec![1.0; N],
        xstar: None,
        hessian_eigs_at_opt: None,
    }
}

fn partial_perturbed_quadratic() -> Problem {
    let obj = |x: &[f64]| {
        let mut total = x[0] * x[0];
        let mut prefix = 0.0;
        for (k, &xi) in x.iter().enumerate() {
            total += (k + 1) as f64 * xi * xi;
            prefix += xi;
            total += 0.01 * prefix * prefix;
        }
        total
    };
    let grad = |x: &[f64]| {
        // Prefix sums S_k, then suffix sums of S for the coupling term.
        let mut s = Vec::with_capacity(N);
        let mut acc = 0.0;
        for &xi in x {
            acc += xi;
            s.push(acc);
        }
        let mut suffix = vec![0.0; N + 1];
        for k in (0..N).rev() {
            suffix[k] = suffix[k + 1] + s[k];
        }
        let mut g: Vec<f64> = x
            .iter()
            .enumerate()
            .map(|(k, &xi)| 2.0 * (k + 1) as f64 * xi + 0.02 * suffix[k])
            .collect();
        g[0] += 2.0 * x[0];
        g
    };
    Problem {
        name: "fun8".into(),
        n: N,
        objective: Box::new(obj),
        gradient: Box::new(grad),
        x0: vec![1.0; N],
        xstar: None,
        hessian_eigs_at_opt: None,
    }
}

fn engval1() -> Problem {
    let obj = |x: &[f64]| {
        let mut total = 0.0;
        for k in 0..N - 1 {
            let u = x[k] * x[k] + x[k + 1] * x[k + 1];
            total += u * u - 4.0 * x[k] + 3.0;
        }
        total
    };
    let grad = |x: &[f64]| {
        let mut g = vec![0.0; N];
        for k in 0..N - 1 {
            let u = x[k] * x[k] + x[k + 1] * x[k + 1];
            g[k] += 4.0 * x[k] * u - 4.0;
            g[k + 1] += 4.0 * x[k + 1] * u;
        }
        g
    };
    Problem {
        name: "fun9".into(),
        n: N,
        objective: Box::new(obj),
        gradient: Box::new(grad),
        x0: vec![2.0; N],
        xstar: None,
        hessian_eigs_at_opt: None,
    }
}

fn edensch() -> Problem {
    let obj = |x: &[f64]| {
        let mut total = 16.0;
        for k in 0..N - 1 {
            let u = x[k] - 2.0;
            let v = x[k] * x[k + 1] - 2.0 * x[k + 1];
            let w = x[k + 1] + 1.0;
            total += u * u * u * u + v * v + w * w;
        }
        total
    };
    let grad = |x: &[f64]| {
        let mut g = vec![0.0; N];
        for k in 0..N - 1 {
            let u = x[k] - 2.0;
            let v = x[k] * x[k + 1] - 2.0 * x[k + 1];
            g[k] += 4.0 * u * u * u + 2.0 * v * x[k + 1];
            g[k + 1] += 2.0 * v * (x[k] - 2.0) + 2.0 * (x[k + 1] + 1.0);
        }
        g
    };
    Problem {
        name: "fun10".into(),
        n: N,
        objective: Box::new(obj),
        gradient: Box::new(grad),
        x0: vec![0.0; N],
        xstar: None,
        hessian_eigs_at_opt: None,
    }
}

/// The identifiers of the ten benchmark functions, in canonical order.
pub fn benchmark_names() -> [&'static str; 10] {
    [
        "fun1", "fun2", "fun3", "fun4", "fun5", "fun6", "fun7", "fun8", "fun9", "fun10",
    ]
}

/// Looks up a problem by name: `fun1`..`fun10`, or `quad` (curvature 10).
pub fn get_problem(name: &str) -> Result<Problem> {
    match name {
        "fun1" => Ok(extended_himmelblau(false)),
        "fun1-classical" => Ok(extended_himmelblau(true)),
        "fun2" => Ok(extended_maratos()),
        "fun3" => Ok(quadratic_qf1()),
        "fun4" => Ok(extended_bd1()),
        "fun5" => Ok(tridia()),
        "fun6" => Ok(arwhead()),
        "fun7" => Ok(eg2()),
        "fun8" => Ok(partial_perturbed_quadratic()),
        "fun9" => Ok(engval1()),
        "fun10" => Ok(edensch()),
        "quad" => Ok(quad(10.0)),
        other => Err(Error::UnknownProblem(other.to_string())),
    }
}

/// Central-difference gradient with a fixed step `h`.
pub fn fd_gradient(problem: &Problem, x: &[f64], h: f64) -> Result<Vec<f64>> {
    let h_ok = h.is_finite() && h > 0.0;
    if !h_ok {
        return Err(Error::InvalidArgument("fd step h must be > 0".into()));
    }
    let mut point = x.to_vec();
    let mut g = Vec::with_capacity(x.len());
    for i in 0..x.len() {
        point[i] = x[i] + h;
        let fp = problem.objective(&point);
        point[i] = x[i] - h;
        let fm = problem.objective(&point);
        point[i] = x[i];
        if !fp.is_finite() || !fm.is_finite() {
            return Err(Error::NonFiniteEvaluation);
        }
        g.push((fp - fm) / (2.0 * h));
    }
    Ok(g)
}

/// Central-difference gradient with the per-coordinate step
/// `h_i = 1e-6 * max(1, |x_i|)` used by the gradient checks.
pub fn fd_gradient_scaled(problem: &Problem, x: &[f64]) -> Result<Vec<f64>> {
    let mut point = x.to_vec();
    let mut g = Vec::with_capacity(x.len());
    for i in 0..x.len() {
        let h = 1e-6 * x[i].abs().max(1.0);
        point[i] = x[i] + h;
        let fp = problem.objective(&point);
        point[i] = x[i] - h;
        let fm = problem.objective(&point);
        point[i] = x[i];
        if !fp.is_finite() || !fm.is_finite() {
            return Err(Error::NonFiniteEvaluation);
        }
        g.push((fp - fm) / (2.0 * h));
    }
    Ok(g)
}

/// Maximum scale-protected relative deviation between the analytic and
/// finite-difference gradients at `x`.
pub fn gradient_check(problem: &Problem, x: &[f64]) -> Result<f64> {
    let analytic = problem.gradient(x);
    let fd = fd_gradient_scaled(problem, x)?;
    Ok(analytic
        .iter()
        .zip(&fd)
        .map(|(&a, &b)| (a - b).abs() / a.abs().max(b.abs()).max(1.0))
        .fold(0.0, f64::max))
}

/// Symmetrized central second differences of the objective; the output is
/// exactly symmetric.
pub fn fd_hessian(problem: &Problem, x: &[f64], h: f64) -> Result<Vec<Vec<f64>>> {
    let h_ok = h.is_finite() && h > 0.0;
    if !h_ok {
        return Err(Error::InvalidArgument("fd step h must be > 0".into()));
    }
    let n = x.len();
    if n > 200 {
        return Err(Error::InvalidArgument(
            "fd_hessian supports dimensions up to 200".into(),
        ));
    }
    let f0 = problem.objective(x);
    if !f0.is_finite() {
        return Err(Error::NonFiniteEvaluation);
    }
    let mut point = x.to_vec();
    let eval = |p: &mut Vec<f64>, i: usize, j: usize, si: f64, sj: f64| -> Result<f64> {
        p[i] += si * h;
        p[j] += sj * h;
        let f = problem.objective(p);
        p[i] = x[i];
        p[j] = x[j];
        if f.is_finite() {
            Ok(f)
        } else {
            Err(Error::NonFiniteEvaluation)
        }
    };
    let mut hess = vec![vec![0.0; n]; n];
    for i in 0..n {
        let fp = eval(&mut point, i, i, 0.5, 0.5)?;
        let fm = eval(&mut point, i, i, -0.5, -0.5)?;
        hess[i][i] = (fp - 2.0 * f0 + fm) / (h * h);
        for j in i + 1..n {
            let fpp = eval(&mut point, i, j, 1.0, 1.0)?;
            let fpm = eval(&mut point, i, j, 1.0, -1.0)?;
            let fmp = eval(&mut point, i, j, -1.0, 1.0)?;
            let fmm = eval(&mut point, i, j, -1.0, -1.0)?;
            let d = (fpp - fpm - fmp + fmm) / (4.0 * h * h);
            hess[i][j] = d;
            hess[j][i] = d;
        }
    }
    Ok(hess)
}

/// Ten deterministic perturbations `x0 + 0.1 * s` of the initial point,
/// cycling over fixed sign patterns. No randomness: the oracle tests are
/// reproducible bit-for-bit.
pub fn test_points(problem: &Problem) -> Vec<Vec<f64>> {
    (0..10)
        .map(|k| {
            problem
                .x0
                .iter()
                .enumerate()
                .map(|(i, &xi)| {
                    let sign = if (i / (k + 1) + k) % 2 == 0 {
                        1.0
                    } else {
                        -1.0
                    };
                    xi + 0.1 * sign
                })
                .collect()
        })
        .collect()
}

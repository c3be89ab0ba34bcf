use dragonfish_cmaes::CmaState;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Runs ask/tell on `f` (to be maximised) until `done(state)` or the budget
/// runs out; returns the evaluations used. Checks C every generation.
fn optimise(
    state: &mut CmaState,
    f: impl Fn(&[f64]) -> f64,
    budget: usize,
    seed: u64,
    done: impl Fn(&CmaState) -> bool,
) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut evals = 0;
    while evals + state.lambda <= budget {
        let xs = state.ask(&mut rng).unwrap();
        let fs: Vec<f64> = xs.iter().map(|x| f(x)).collect();
        evals += xs.len();
        state.tell(&xs, &fs).unwrap();
        let (asym, min_eig) = state.covariance_health();
        assert!(asym <= 1e-12, "asymmetry {asym}");
        assert!(min_eig > 0.0, "eigenvalue {min_eig}");
        if done(state) {
            break;
        }
    }
    evals
}

fn sphere(x: &[f64]) -> f64 {
    -x.iter().map(|v| (v - 1.0).powi(2)).sum::<f64>()
}

fn rosenbrock(x: &[f64]) -> f64 {
    x.windows(2).map(|w| 100.0 * (w[1] - w[0] * w[0]).powi(2) + (1.0 - w[0]).powi(2)).sum()
}

fn distance_to_one(s: &CmaState) -> f64 {
    s.mean.iter().map(|v| (v - 1.0).powi(2)).sum::<f64>().sqrt()
}

#[test]
fn sphere_25d_converges_within_budget() {
    let mut s = CmaState::new(&[0.0; 25], 0.3).unwrap();
    assert_eq!(s.lambda, 13);
    let evals = optimise(&mut s, sphere, 10_000, 1, |s| distance_to_one(s) < 1e-5);
    assert!(distance_to_one(&s) < 1e-5, "distance {} after {evals}", distance_to_one(&s));
}

#[test]
fn rosenbrock_10d_converges_within_budget() {
    let mut s = CmaState::new(&[0.0; 10], 0.3).unwrap();
    let mut best = f64::INFINITY;
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut evals = 0;
    while evals + s.lambda <= 50_000 && best >= 1e-6 {
        let xs = s.ask(&mut rng).unwrap();
        let fs: Vec<f64> = xs.iter().map(|x| -rosenbrock(x)).collect();
        evals += xs.len();
        best = best.min(fs.iter().map(|f| -f).fold(f64::INFINITY, f64::min));
        s.tell(&xs, &fs).unwrap();
        let (asym, min_eig) = s.covariance_health();
        assert!(asym <= 1e-12 && min_eig > 0.0);
    }
    assert!(best < 1e-6, "best {best} after {evals} evaluations");
}

#[test]
fn identity_covariance_samples_have_normal_moments() {
    let mean = [0.5, -1.0, 2.0, 0.0];
    let sigma = 0.7;
    let s = CmaState::with_lambda(&mean, sigma, 10_000).unwrap();
    let xs = s.ask(&mut ChaCha8Rng::seed_from_u64(3)).unwrap();
    assert_eq!(xs.len(), 10_000);
    let n = xs.len() as f64;
    for (i, &m) in mean.iter().enumerate() {
        let avg = xs.iter().map(|x| x[i]).sum::<f64>() / n;
        let var = xs.iter().map(|x| (x[i] - avg).powi(2)).sum::<f64>() / (n - 1.0);
        // Five standard errors of the sample mean and variance.
        assert!((avg - m).abs() < 5.0 * sigma / n.sqrt(), "mean {i}: {avg}");
        let var_se = sigma * sigma * (2.0 / (n - 1.0)).sqrt();
        assert!((var - sigma * sigma).abs() < 5.0 * var_se, "variance {i}: {var}");
    }
    // Coordinates are uncorrelated.
    let cov01 = xs.iter().map(|x| (x[0] - mean[0]) * (x[1] - mean[1])).sum::<f64>() / n;
    assert!(cov01.abs() < 5.0 * sigma * sigma / n.sqrt());
}

#[test]
fn ask_is_reproducible_and_sized() {
    let s = CmaState::new(&[1.0; 25], 0.3).unwrap();
    let a = s.ask(&mut ChaCha8Rng::seed_from_u64(4)).unwrap();
    let b = s.ask(&mut ChaCha8Rng::seed_from_u64(4)).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.len(), 13);
}

#[test]
fn random_fitness_never_breaks_the_state() {
    let mut s = CmaState::new(&[1.0; 25], 0.3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut noise = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..1000 {
        let xs = s.ask(&mut rng).unwrap();
        let fs: Vec<f64> = xs.iter().map(|_| noise.random::<f64>()).collect();
        s.tell(&xs, &fs).unwrap();
        assert!(s.sigma.is_finite() && s.sigma > 0.0);
        assert!(s.mean.iter().chain(s.cov.iter()).all(|v| v.is_finite()));
    }
    let (asym, min_eig) = s.covariance_health();
    assert!(asym <= 1e-12 && min_eig > 0.0);
}

#[test]
fn equal_fitness_uses_candidate_order() {
    let mut s = CmaState::with_lambda(&[0.0; 3], 1.0, 6).unwrap();
    let xs = s.ask(&mut ChaCha8Rng::seed_from_u64(7)).unwrap();
    let w = s.weights.clone();
    let expected: Vec<f64> = (0..3).map(|i| (0..3).map(|k| w[k] * xs[k][i]).sum()).collect();
    let sigma_before = s.sigma;
    s.tell(&xs, &[0.25; 6]).unwrap();
    for (got, want) in s.mean.iter().zip(&expected) {
        assert!((got - want).abs() < 1e-12);
    }
    assert_ne!(s.sigma, sigma_before);
}

//! Rank-μ CMA-ES with cumulative step-size adaptation, maximising.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::Error;

/// Smallest eigenvalue kept when repairing the covariance.
pub const EIGEN_FLOOR: f64 = 1e-12;

/// Default population size for a problem of dimension `n`.
pub fn default_lambda(n: usize) -> usize {
    4 + (3.0 * (n as f64).ln()).floor() as usize
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Constants {
    pub c_sigma: f64,
    pub d_sigma: f64,
    pub c_c: f64,
    pub c_1: f64,
    pub c_mu: f64,
    pub mu_eff: f64,
    pub chi_n: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CmaState {
    pub mean: DVector<f64>,
    pub sigma: f64,
    pub cov: DMatrix<f64>,
    pub p_sigma: DVector<f64>,
    pub p_c: DVector<f64>,
    pub generation: u64,
    pub lambda: usize,
    pub mu: usize,
    /// Positive, descending, summing to one.
    pub weights: Vec<f64>,
    pub constants: Constants,
}

/// Eigen-decomposition `C = B diag(d²) Bᵀ` with the eigenvalues floored.
struct Decomposition {
    basis: DMatrix<f64>,
    scales: DVector<f64>,
}

impl CmaState {
    pub fn new(mean: &[f64], sigma: f64) -> Result<CmaState, Error> {
        CmaState::with_lambda(mean, sigma, default_lambda(mean.len()))
    }

    pub fn with_lambda(mean: &[f64], sigma: f64, lambda: usize) -> Result<CmaState, Error> {
        let n = mean.len();
        if n == 0 {
            return Err(Error::Config("dimension must be positive".into()));
        }
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::Config(format!("step size must be positive, got {sigma}")));
        }
        if lambda < 2 {
            return Err(Error::Config(format!("population size must be at least 2, got {lambda}")));
        }
        if mean.iter().any(|x| !x.is_finite()) {
            return Err(Error::Config("initial mean must be finite".into()));
        }
        let mu = lambda / 2;
        let raw: Vec<f64> =
            (1..=mu).map(|i| ((lambda as f64 + 1.0) / 2.0).ln() - (i as f64).ln()).collect();
        let total: f64 = raw.iter().sum();
        let weights: Vec<f64> = raw.iter().map(|w| w / total).collect();
        let mu_eff = 1.0 / weights.iter().map(|w| w * w).sum::<f64>();
        let nf = n as f64;
        let c_sigma = (mu_eff + 2.0) / (nf + mu_eff + 5.0);
        let d_sigma = 1.0 + 2.0 * (((mu_eff - 1.0) / (nf + 1.0)).sqrt() - 1.0).max(0.0) + c_sigma;
        let c_c = (4.0 + mu_eff / nf) / (nf + 4.0 + 2.0 * mu_eff / nf);
        let c_1 = 2.0 / ((nf + 1.3).powi(2) + mu_eff);
        let c_mu = (1.0 - c_1).min(2.0 * (mu_eff - 2.0 + 1.0 / mu_eff) / ((nf + 2.0).powi(2) + mu_eff));
        let chi_n = nf.sqrt() * (1.0 - 1.0 / (4.0 * nf) + 1.0 / (21.0 * nf * nf));
        Ok(CmaState {
            mean: DVector::from_column_slice(mean),
            sigma,
            cov: DMatrix::identity(n, n),
            p_sigma: DVector::zeros(n),
            p_c: DVector::zeros(n),
            generation: 0,
            lambda,
            mu,
            weights,
            constants: Constants { c_sigma, d_sigma, c_c, c_1, c_mu, mu_eff, chi_n },
        })
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    fn decompose(&self) -> Result<Decomposition, Error> {
        let eig = SymmetricEigen::new(self.cov.clone());
        if eig.eigenvalues.iter().any(|v| !v.is_finite()) {
            return Err(Error::Numeric("covariance has non-finite eigenvalues".into()));
        }
        let scales = eig.eigenvalues.map(|v| v.max(EIGEN_FLOOR).sqrt());
        Ok(Decomposition { basis: eig.eigenvectors, scales })
    }

    /// `lambda` candidates `mean + sigma * C^{1/2} z` with `z` standard
    /// normal, drawn in order from `rng`.
    pub fn ask<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Vec<Vec<f64>>, Error> {
        let d = self.decompose()?;
        let n = self.dim();
        let mut out = Vec::with_capacity(self.lambda);
        for _ in 0..self.lambda {
            let z = DVector::from_iterator(n, (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)));
            let y = &d.basis * z.component_mul(&d.scales);
            out.push((&self.mean + y * self.sigma).iter().copied().collect());
        }
        Ok(out)
    }

    /// Updates the distribution from scored candidates (higher is better).
    /// Non-finite scores rank below every finite one; ties keep the
    /// candidate order.
    pub fn tell(&mut self, candidates: &[Vec<f64>], fitness: &[f64]) -> Result<(), Error> {
        let n = self.dim();
        if candidates.len() != self.lambda || fitness.len() != self.lambda {
            return Err(Error::Config(format!(
                "expected {} candidates and scores, got {} and {}",
                self.lambda,
                candidates.len(),
                fitness.len()
            )));
        }
        if candidates.iter().any(|c| c.len() != n) {
            return Err(Error::Config(format!("candidates must have dimension {n}")));
        }
        let bad = fitness.iter().filter(|f| !f.is_finite()).count();
        if bad > 0 {
            log::warn!("{bad} non-finite fitness value(s) ranked last");
        }
        let key = |f: f64| if f.is_finite() { f } else { f64::NEG_INFINITY };
        let mut order: Vec<usize> = (0..self.lambda).collect();
        order.sort_by(|&a, &b| key(fitness[b]).total_cmp(&key(fitness[a])));

        let d = self.decompose()?;
        let k = self.constants.clone();
        let ys: Vec<DVector<f64>> = order[..self.mu]
            .iter()
            .map(|&i| (DVector::from_column_slice(&candidates[i]) - &self.mean) / self.sigma)
            .collect();
        let mut y_w = DVector::zeros(n);
        for (w, y) in self.weights.iter().zip(&ys) {
            y_w += y * *w;
        }
        self.mean += &y_w * self.sigma;

        // C^{-1/2} y_w = B D^{-1} Bᵀ y_w
        let inv_sqrt_y = &d.basis * (d.basis.transpose() * &y_w).component_div(&d.scales);
        self.p_sigma = &self.p_sigma * (1.0 - k.c_sigma) + inv_sqrt_y * (k.c_sigma * (2.0 - k.c_sigma) * k.mu_eff).sqrt();
        let ps_norm = self.p_sigma.norm();
        let decay = 1.0 - (1.0 - k.c_sigma).powf(2.0 * (self.generation as f64 + 1.0));
        let h_sigma = ps_norm / decay.sqrt() < (1.4 + 2.0 / (n as f64 + 1.0)) * k.chi_n;
        let h = if h_sigma { 1.0 } else { 0.0 };
        self.p_c = &self.p_c * (1.0 - k.c_c) + &y_w * (h * (k.c_c * (2.0 - k.c_c) * k.mu_eff).sqrt());

        let delta = (1.0 - h) * k.c_c * (2.0 - k.c_c);
        let mut rank_mu = DMatrix::zeros(n, n);
        for (w, y) in self.weights.iter().zip(&ys) {
            rank_mu += y * y.transpose() * *w;
        }
        self.cov = &self.cov * (1.0 - k.c_1 - k.c_mu + k.c_1 * delta)
            + &self.p_c * self.p_c.transpose() * k.c_1
            + rank_mu * k.c_mu;
        self.cov = (&self.cov + self.cov.transpose()) * 0.5;
        self.repair();

        self.sigma *= ((k.c_sigma / k.d_sigma) * (ps_norm / k.chi_n - 1.0)).exp();
        self.generation += 1;
        if !self.sigma.is_finite() || self.sigma <= 0.0 || self.mean.iter().any(|x| !x.is_finite()) {
            return Err(Error::Numeric(format!("state diverged at generation {}", self.generation)));
        }
        Ok(())
    }

    /// Floors the covariance eigenvalues when one has dropped too low.
    fn repair(&mut self) {
        let eig = SymmetricEigen::new(self.cov.clone());
        if eig.eigenvalues.iter().all(|&v| v >= EIGEN_FLOOR) {
            return;
        }
        log::warn!("covariance eigenvalues floored at {EIGEN_FLOOR}");
        let floored = eig.eigenvalues.map(|v| v.max(EIGEN_FLOOR));
        let c = &eig.eigenvectors * DMatrix::from_diagonal(&floored) * eig.eigenvectors.transpose();
        self.cov = (&c + c.transpose()) * 0.5;
    }

    /// Largest asymmetry `|C_ij - C_ji|` and smallest eigenvalue of C.
    pub fn covariance_health(&self) -> (f64, f64) {
        let n = self.dim();
        let mut asym = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                asym = asym.max((self.cov[(i, j)] - self.cov[(j, i)]).abs());
            }
        }
        let min_eig = SymmetricEigen::new(self.cov.clone()).eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
        (asym, min_eig)
    }
}

//! Small statistics toolkit shared by the Monte Carlo harnesses.

use rand::seq::SliceRandom;

/// A Monte Carlo estimate against its closed-form target.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StatRecord {
    pub estimate: f64,
    pub std_error: f64,
    pub target: f64,
    pub z_score: f64,
}

impl StatRecord {
    pub fn new(estimate: f64, std_error: f64, target: f64) -> Self {
        let diff = estimate - target;
        let z_score = if std_error > 0.0 {
            diff / std_error
        } else if diff == 0.0 {
            0.0
        } else {
            f64::INFINITY.copysign(diff)
        };
        Self { estimate, std_error, target, z_score }
    }

    pub fn from_accumulator(acc: &MeanVar, target: f64) -> Self {
        Self::new(acc.mean(), acc.std_error(), target)
    }

    pub fn within(&self, n_se: f64) -> bool {
        self.z_score.abs() <= n_se
    }

    pub const CSV_HEADER: &'static str = "estimate,std_error,target,z_score";

    pub fn csv_row(&self) -> String {
        format!("{:.12e},{:.12e},{:.12e},{:.6}", self.estimate, self.std_error, self.target, self.z_score)
    }
}

/// Streaming mean and variance (Welford), mergeable across workers.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct MeanVar {
    n: u64,
    mean: f64,
    m2: f64,
}

impl MeanVar {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    pub fn merge(&mut self, other: &MeanVar) {
        if other.n == 0 {
            return;
        }
        let n = self.n + other.n;
        let d = other.mean - self.mean;
        self.mean += d * other.n as f64 / n as f64;
        self.m2 += other.m2 + d * d * self.n as f64 * other.n as f64 / n as f64;
        self.n = n;
    }

    pub fn count(&self) -> u64 {
        self.n
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn variance(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            self.m2 / (self.n - 1) as f64
        }
    }

    pub fn std_error(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            (self.variance() / self.n as f64).sqrt()
        }
    }
}

impl FromIterator<f64> for MeanVar {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = MeanVar::default();
        iter.into_iter().for_each(|x| acc.push(x));
        acc
    }
}

/// Sample mean and standard error of the mean.
pub fn mean_se(xs: &[f64]) -> (f64, f64) {
    let acc: MeanVar = xs.iter().copied().collect();
    (acc.mean(), acc.std_error())
}

/// Mid-ranks (ties share the average rank), 1-based.
pub fn ranks(xs: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]));
    let mut out = vec![0.0; xs.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && xs[order[j + 1]] == xs[order[i]] {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            out[k] = rank;
        }
        i = j + 1;
    }
    out
}

fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        0.0
    } else {
        sxy / (sxx * syy).sqrt()
    }
}

/// Spearman rank correlation.
pub fn spearman(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len());
    pearson(&ranks(x), &ranks(y))
}

/// Spearman correlation with a one-sided permutation p-value for
/// `ρ > 0`, using `permutations` seeded shuffles of `y`.
pub fn spearman_test(x: &[f64], y: &[f64], permutations: usize, seed: u64) -> (f64, f64) {
    let rx = ranks(x);
    let ry = ranks(y);
    let rho = pearson(&rx, &ry);
    let mut rng = crate::rng::stream(seed, 0);
    let mut shuffled = ry.clone();
    let mut hits = 0usize;
    for _ in 0..permutations {
        shuffled.shuffle(&mut rng);
        if pearson(&rx, &shuffled) >= rho - 1e-12 {
            hits += 1;
        }
    }
    (rho, (hits + 1) as f64 / (permutations + 1) as f64)
}

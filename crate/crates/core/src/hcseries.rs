//! Harish-Chandra series Σ_μ Γ_μ e^{(λ−ρ−μ)(log a)} for BC_n with arbitrary
//! multiplicities, used as an oracle independent of the closed formulas.
//!
//! A lattice point μ = Σ μ_j e_j of the positive root cone is stored by its
//! integer coordinates μ_j. In t-coordinates the exponent of its term is
//! Σ_j (λ_j − ρ_j − 2μ_j) t_j.
//!
//! Expanding every coth in L(k) as 1 + 2Σ_{p≥1} e^{−2p·(argument)} and
//! matching exponents gives
//!
//! D(μ) Γ_μ = −Σ_{roots, p≥1} w_root(μ − pθ) Γ_{μ−pθ},
//! D(μ) = Σ_j 4μ_j² − 4λ_j μ_j,
//!
//! with θ = e_j (weight 4k_s x_j), θ = 2e_j (weight 8k_l x_j),
//! θ = e_i ∓ e_j (weight 4k_m (x_i ∓ x_j)), where x = λ − ρ − 2ν is the
//! exponent of the source term ν.

use std::collections::HashMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::roots::{ChamberPoint, MultiplicityBC, SpectralParam};

/// Default truncation height.
pub const DEFAULT_ORDER: usize = 12;

/// Largest admissible ratio of the last two shells to the series value.
pub const TAIL_TOL: f64 = 1e-10;

/// |D(μ)| must exceed this multiple of max(1, |λ|²).
pub const GENERICITY_MARGIN: f64 = 1e-8;

/// Coefficients Γ_μ for all μ in the positive cone of height ≤ order.
#[derive(Debug, Clone)]
pub struct HCCoeffTable {
    order: usize,
    lambda: Vec<Complex64>,
    rho: Vec<Complex64>,
    /// (μ, height, Γ_μ) sorted by height.
    entries: Vec<(Vec<i32>, usize, Complex64)>,
    index: HashMap<Vec<i32>, usize>,
}

/// Series value together with the size of its last two shells.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: Complex64,
    /// max(|shell N|, |shell N−1|) / |value|.
    pub tail_estimate: f64,
}

impl HCCoeffTable {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn rank(&self) -> usize {
        self.lambda.len()
    }

    pub fn lambda(&self) -> &[Complex64] {
        &self.lambda
    }

    /// Γ_μ, or 0 when μ is outside the cone or above the truncation height.
    pub fn get(&self, mu: &[i32]) -> Complex64 {
        self.index.get(mu).map(|&i| self.entries[i].2).unwrap_or_default()
    }

    /// (μ, height, Γ_μ) in order of increasing height.
    pub fn iter(&self) -> impl Iterator<Item = (&[i32], usize, Complex64)> {
        self.entries.iter().map(|(m, h, g)| (m.as_slice(), *h, *g))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Height Σ_r (partial sum μ_1 + … + μ_r); negative partial sums mean μ is
/// outside the cone.
fn height(mu: &[i32]) -> Option<usize> {
    let mut partial = 0i64;
    let mut h = 0i64;
    for &m in mu {
        partial += m as i64;
        if partial < 0 {
            return None;
        }
        h += partial;
    }
    Some(h as usize)
}

/// All cone points of height ≤ order, by increasing height. The partial
/// sums c_1, …, c_n are non-negative integers with Σ c_r = height.
fn cone_points(n: usize, order: usize) -> Vec<(Vec<i32>, usize)> {
    fn rec(n: usize, budget: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for c in 0..=budget {
            prefix.push(c);
            rec(n, budget - c, prefix, out);
            prefix.pop();
        }
    }
    let mut sums = Vec::new();
    rec(n, order, &mut Vec::with_capacity(n), &mut sums);
    let mut points: Vec<(Vec<i32>, usize)> = sums
        .into_iter()
        .map(|c| {
            let mu: Vec<i32> = (0..n)
                .map(|i| c[i] as i32 - if i == 0 { 0 } else { c[i - 1] as i32 })
                .collect();
            (mu, c.iter().sum())
        })
        .collect();
    points.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
    points
}

/// Checks −2(λ, μ) + (μ, μ) against the genericity margin for every cone
/// point of height 1..=order.
pub fn check_generic(lambda: &SpectralParam, order: usize) -> Result<()> {
    let lam = lambda.as_slice();
    let margin = GENERICITY_MARGIN * lambda.scale();
    for (mu, h) in cone_points(lam.len(), order) {
        if h == 0 {
            continue;
        }
        let d = denominator(lam, &mu);
        if d.norm() <= margin {
            return Err(Error::SmallDenominator(format!(
                "-2(lambda, mu) + (mu, mu) = {d} at mu = {mu:?}"
            )));
        }
    }
    Ok(())
}

/// D(μ) = Σ_j 4μ_j² − 4λ_j μ_j, four times (μ, μ) − 2(λ, μ).
fn denominator(lam: &[Complex64], mu: &[i32]) -> Complex64 {
    lam.iter()
        .zip(mu)
        .map(|(l, &m)| {
            let m = m as f64;
            4.0 * m * m - 4.0 * l * m
        })
        .sum()
}

/// Coefficient table for BC_n multiplicities (k_s, k_m, k_l) with k_m an
/// arbitrary complex number.
pub fn compute_coeffs_general(
    k_s: Complex64,
    k_m: Complex64,
    k_l: Complex64,
    lambda: &SpectralParam,
    order: usize,
) -> Result<HCCoeffTable> {
    let n = lambda.len();
    let lam = lambda.as_slice().to_vec();
    let rho: Vec<Complex64> = (1..=n).map(|j| k_s + 2.0 * k_l + 2.0 * (n - j) as f64 * k_m).collect();
    let margin = GENERICITY_MARGIN * lambda.scale();

    let mut table = HCCoeffTable {
        order,
        lambda: lam.clone(),
        rho: rho.clone(),
        entries: Vec::new(),
        index: HashMap::new(),
    };

    // Exponent x_j of the source term ν.
    let x = |nu: &[i32], j: usize| lam[j] - rho[j] - 2.0 * nu[j] as f64;

    for (mu, h) in cone_points(n, order) {
        let gamma = if h == 0 {
            Complex64::new(1.0, 0.0)
        } else {
            let d = denominator(&lam, &mu);
            if d.norm() <= margin {
                return Err(Error::SmallDenominator(format!(
                    "-2(lambda, mu) + (mu, mu) = {d} at mu = {mu:?}"
                )));
            }
            let mut rhs = Complex64::new(0.0, 0.0);
            let mut nu = mu.clone();
            // Walk ν = μ − pθ for p = 1, 2, … while ν stays in the cone.
            let mut walk = |shift: &dyn Fn(&mut Vec<i32>, i32), weight: &dyn Fn(&[i32]) -> Complex64| {
                let mut p = 1;
                loop {
                    nu.copy_from_slice(&mu);
                    shift(&mut nu, p);
                    if height(&nu).is_none() {
                        break;
                    }
                    let g = table.get(&nu);
                    if g != Complex64::new(0.0, 0.0) {
                        rhs += weight(&nu) * g;
                    }
                    p += 1;
                }
            };
            for j in 0..n {
                if k_s != Complex64::new(0.0, 0.0) {
                    walk(&|v, p| v[j] -= p, &|v| 4.0 * k_s * x(v, j));
                }
                if k_l != Complex64::new(0.0, 0.0) {
                    walk(&|v, p| v[j] -= 2 * p, &|v| 8.0 * k_l * x(v, j));
                }
            }
            if k_m != Complex64::new(0.0, 0.0) {
                for i in 0..n {
                    for j in i + 1..n {
                        walk(
                            &|v, p| {
                                v[i] -= p;
                                v[j] += p;
                            },
                            &|v| 4.0 * k_m * (x(v, i) - x(v, j)),
                        );
                        walk(
                            &|v, p| {
                                v[i] -= p;
                                v[j] -= p;
                            },
                            &|v| 4.0 * k_m * (x(v, i) + x(v, j)),
                        );
                    }
                }
            }
            -rhs / d
        };
        table.index.insert(mu.clone(), table.entries.len());
        table.entries.push((mu, h, gamma));
    }
    Ok(table)
}

/// Coefficient table for a BC_n multiplicity.
pub fn compute_coeffs(k: &MultiplicityBC, lambda: &SpectralParam, order: usize) -> Result<HCCoeffTable> {
    if lambda.len() != k.n() {
        return Err(Error::Parameter(format!(
            "lambda has {} components, rank is {}",
            lambda.len(),
            k.n()
        )));
    }
    compute_coeffs_general(k.k_s(), Complex64::new(k.k_m() as f64, 0.0), k.k_l(), lambda, order)
}

/// Truncated series at a chamber point, rejecting points where the last two
/// shells are not negligible.
pub fn series_eval(table: &HCCoeffTable, t: &ChamberPoint) -> Result<SeriesValue> {
    let v = series_eval_unchecked(table, t.as_slice())?;
    if v.tail_estimate > TAIL_TOL {
        return Err(Error::TailTooLarge(format!(
            "shell estimate {:.3e} at t = {:?}, order {}",
            v.tail_estimate,
            t.as_slice(),
            table.order
        )));
    }
    Ok(v)
}

/// Same sum without the tail check, for any real point of matching length.
pub fn series_eval_unchecked(table: &HCCoeffTable, t: &[f64]) -> Result<SeriesValue> {
    let n = table.rank();
    if t.len() != n {
        return Err(Error::Parameter(format!("t has {} components, rank is {n}", t.len())));
    }
    let lead: Complex64 = (0..n)
        .map(|j| (table.lambda[j] - table.rho[j]) * t[j])
        .sum::<Complex64>()
        .exp();
    let mut sum = Complex64::new(0.0, 0.0);
    let mut shells = vec![0.0; table.order + 1];
    for (mu, h, g) in table.iter() {
        let decay: f64 = mu.iter().zip(t).map(|(&m, &tj)| -2.0 * m as f64 * tj).sum();
        let term = g * decay.exp();
        sum += term;
        shells[h] += term.norm();
    }
    let last = shells[table.order].max(if table.order > 0 { shells[table.order - 1] } else { 0.0 });
    let tail_estimate = if table.order == 0 { 0.0 } else { last / sum.norm() };
    let value = lead * sum;
    if !(value.re.is_finite() && value.im.is_finite()) {
        return Err(Error::NotFinite(format!("series value at t = {t:?}")));
    }
    Ok(SeriesValue { value, tail_estimate })
}

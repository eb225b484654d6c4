//! BC_n data: multiplicities, spectral and chamber coordinates, the Weyl
//! group of signed permutations, Weyl denominators and c-functions.
//!
//! Coordinates follow one dictionary throughout: λ_j = (λ, 2e_j) and
//! t_j = e_j(log a)/2, so that e^{(λ, log a)} = e^{Σ λ_j t_j}.

use std::f64::consts::PI;
use std::ops::Neg;

use itertools::Itertools;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::jacobi::JacobiParams;
use crate::scalar::{check_finite, gamma_ratio, log_gamma, near_integer, POLE_TOL};

/// Largest supported rank.
pub const MAX_RANK: usize = 8;

/// Relative size of min |λ_i² − λ_j²|, in units of max(1, |λ|²), below
/// which a spectral parameter counts as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-8;

/// Multiplicities (k_s, k_m, k_l) on the short roots e_j, the middle roots
/// e_i ± e_j and the long roots 2e_j, together with the rank n.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MultiplicityBC {
    n: usize,
    k_s: Complex64,
    k_m: u8,
    k_l: Complex64,
}

impl MultiplicityBC {
    pub fn new(n: usize, k_s: impl Into<Complex64>, k_m: u8, k_l: impl Into<Complex64>) -> Result<Self> {
        let k_s = check_finite(k_s.into(), "k_s")?;
        let k_l = check_finite(k_l.into(), "k_l")?;
        if n == 0 {
            return Err(Error::Parameter("rank n must be at least 1".into()));
        }
        if n > MAX_RANK {
            return Err(Error::Size(format!("rank n = {n} exceeds {MAX_RANK}")));
        }
        if k_m > 1 {
            return Err(Error::Parameter(format!("k_m = {k_m} must be 0 or 1")));
        }
        JacobiParams::from_multiplicities(k_s, k_l)?;
        Ok(MultiplicityBC { n, k_s, k_m, k_l })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k_s(&self) -> Complex64 {
        self.k_s
    }

    pub fn k_m(&self) -> u8 {
        self.k_m
    }

    pub fn k_l(&self) -> Complex64 {
        self.k_l
    }

    /// α = k_s + k_l − 1/2.
    pub fn alpha(&self) -> Complex64 {
        self.k_s + self.k_l - 0.5
    }

    /// β = k_l − 1/2.
    pub fn beta(&self) -> Complex64 {
        self.k_l - 0.5
    }

    /// The BC₁ value k_s + 2k_l of ρ.
    pub fn rho1(&self) -> Complex64 {
        self.k_s + 2.0 * self.k_l
    }

    pub fn jacobi(&self) -> JacobiParams {
        JacobiParams {
            alpha: self.alpha(),
            beta: self.beta(),
        }
    }

    /// Rejects α ∈ {0, −1, −2, …}, where the closed formulas break down.
    pub fn check_alpha_admissible(&self) -> Result<()> {
        match near_integer(self.alpha(), POLE_TOL) {
            Some(m) if m <= 0 => Err(Error::Parameter(format!(
                "alpha = k_s + k_l - 1/2 = {} is a non-positive integer",
                self.alpha()
            ))),
            _ => Ok(()),
        }
    }
}

/// Spectral parameter in the coordinates λ_j = (λ, 2e_j).
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralParam {
    lambda: Vec<Complex64>,
}

impl SpectralParam {
    pub fn new(lambda: Vec<Complex64>) -> Result<Self> {
        if lambda.is_empty() {
            return Err(Error::Parameter("empty spectral parameter".into()));
        }
        for (j, l) in lambda.iter().enumerate() {
            check_finite(*l, &format!("lambda_{}", j + 1))?;
        }
        Ok(SpectralParam { lambda })
    }

    pub fn from_real(lambda: &[f64]) -> Result<Self> {
        SpectralParam::new(lambda.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.lambda
    }

    pub fn len(&self) -> usize {
        self.lambda.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambda.is_empty()
    }

    pub fn squares(&self) -> Vec<Complex64> {
        self.lambda.iter().map(|l| l * l).collect()
    }

    /// max(1, Σ|λ_j|²), the unit for degeneracy tests.
    pub fn scale(&self) -> f64 {
        self.lambda.iter().map(|l| l.norm_sqr()).sum::<f64>().max(1.0)
    }

    /// Index pairs (i, j), i < j, with |λ_i² − λ_j²| at or below the
    /// degeneracy tolerance.
    pub fn degenerate_pairs(&self) -> Vec<(usize, usize)> {
        let s = self.squares();
        let tol = DEGENERACY_TOL * self.scale();
        (0..s.len())
            .array_combinations()
            .filter(|&[i, j]| (s[i] - s[j]).norm() <= tol)
            .map(|[i, j]| (i, j))
            .collect()
    }

    pub fn is_regular(&self) -> bool {
        self.degenerate_pairs().is_empty()
    }
}

/// Point t of the open chamber t_1 > t_2 > … > t_n > 0.
#[derive(Debug, Clone, PartialEq)]
pub struct ChamberPoint {
    t: Vec<f64>,
}

impl ChamberPoint {
    /// Accepts only points already in canonical order.
    pub fn new(t: Vec<f64>) -> Result<Self> {
        if t.is_empty() {
            return Err(Error::Parameter("empty chamber point".into()));
        }
        if let Some(x) = t.iter().find(|x| !x.is_finite()) {
            return Err(Error::NotFinite(format!("t component {x}")));
        }
        let ordered = t.windows(2).all(|w| w[0] > w[1]);
        if !ordered || *t.last().unwrap() <= 0.0 {
            return Err(Error::Chamber(format!(
                "t = {t:?} does not satisfy t_1 > ... > t_n > 0"
            )));
        }
        Ok(ChamberPoint { t })
    }

    /// Moves a raw point into the chamber by the Weyl group: absolute values
    /// sorted in decreasing order. Points on a wall are rejected.
    pub fn canonicalize(raw: &[f64]) -> Result<Self> {
        let mut t: Vec<f64> = raw.iter().map(|x| x.abs()).collect();
        t.sort_by(|a, b| b.total_cmp(a));
        ChamberPoint::new(t)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.t
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }
}

/// Positive root of BC_n, indices 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PositiveRoot {
    /// e_j
    Short(usize),
    /// 2e_j
    Long(usize),
    /// e_i − e_j, i < j
    Diff(usize, usize),
    /// e_i + e_j, i < j
    Sum(usize, usize),
}

pub fn positive_roots(n: usize) -> Vec<PositiveRoot> {
    let mut roots = Vec::with_capacity(n * n + n);
    for j in 0..n {
        roots.push(PositiveRoot::Short(j));
        roots.push(PositiveRoot::Long(j));
    }
    for [i, j] in (0..n).array_combinations() {
        roots.push(PositiveRoot::Diff(i, j));
        roots.push(PositiveRoot::Sum(i, j));
    }
    roots
}

/// Which positive roots a c-function product runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootSubset {
    Full,
    /// The middle roots e_i ± e_j.
    MiddleOnly,
    /// Θ = {e_1 − e_2, …, e_{n−1} − e_n}, spanning a root system of type A_{n−1}.
    ThetaAn1,
    /// Θ = Ψ ∖ {e_1 − e_2, …, e_{j−1} − e_j} for 2 ≤ j ≤ n (1-based j), whose
    /// span is the BC_{n−j+1} on the coordinates j, …, n.
    ThetaTail(usize),
}

impl RootSubset {
    pub fn validate(&self, n: usize) -> Result<()> {
        match *self {
            RootSubset::ThetaTail(j) if !(2..=n).contains(&j) => {
                Err(Error::Parameter(format!("ThetaTail({j}) needs 2 <= j <= n = {n}")))
            }
            _ => Ok(()),
        }
    }

    pub fn contains(&self, root: PositiveRoot) -> bool {
        use PositiveRoot::*;
        match *self {
            RootSubset::Full => true,
            RootSubset::MiddleOnly => matches!(root, Diff(..) | Sum(..)),
            RootSubset::ThetaAn1 => matches!(root, Diff(..)),
            RootSubset::ThetaTail(j) => {
                let first = j - 1;
                match root {
                    Short(p) | Long(p) => p >= first,
                    Diff(p, _) | Sum(p, _) => p >= first,
                }
            }
        }
    }
}

/// ρ(k)_j = k_s + 2k_l + 2(n − j)k_m.
pub fn rho(k: &MultiplicityBC) -> SpectralParam {
    let n = k.n();
    let lambda = (1..=n)
        .map(|j| k.rho1() + 2.0 * (n - j) as f64 * k.k_m() as f64)
        .collect();
    SpectralParam { lambda }
}

/// Δ_m = 2^{n(n−1)/2} ∏_{i<j} (cosh 2t_i − cosh 2t_j), evaluated as
/// ∏_{i<j} 4 sinh(t_i + t_j) sinh(t_i − t_j). Accepts any real point.
pub fn delta_m(t: &[f64]) -> f64 {
    t.iter()
        .array_combinations()
        .map(|[a, b]| 4.0 * (a + b).sinh() * (a - b).sinh())
        .product()
}

/// Δ_{m,rat} = ∏_{i<j} (2t_i − 2t_j)(2t_i + 2t_j), the limit of
/// ε^{−n(n−1)} Δ_m(εt) as ε → 0.
pub fn delta_m_rational(t: &[f64]) -> f64 {
    t.iter()
        .array_combinations()
        .map(|[a, b]| 4.0 * (a + b) * (a - b))
        .product()
}

/// Weyl group element (ε, σ) acting by x_j ↦ ε_j x_{σ(j)}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeylElement {
    pub signs: Vec<i8>,
    pub perm: Vec<usize>,
}

impl WeylElement {
    pub fn act<T: Copy + Neg<Output = T>>(&self, x: &[T]) -> Vec<T> {
        self.perm
            .iter()
            .zip(&self.signs)
            .map(|(&p, &s)| if s < 0 { -x[p] } else { x[p] })
            .collect()
    }
}

/// 2ⁿ n!
pub fn weyl_group_order(n: usize) -> usize {
    (1..=n).product::<usize>() << n
}

/// All 2ⁿ n! signed permutations, permutations in lexicographic order and
/// sign patterns in binary order within each.
pub fn weyl_elements(n: usize) -> Result<impl Iterator<Item = WeylElement>> {
    if n > MAX_RANK {
        return Err(Error::Size(format!("Weyl group of rank {n} > {MAX_RANK}")));
    }
    Ok((0..n).permutations(n).flat_map(move |perm| {
        (0u32..(1 << n)).map(move |mask| WeylElement {
            signs: (0..n).map(|j| if mask >> j & 1 == 1 { -1 } else { 1 }).collect(),
            perm: perm.clone(),
        })
    }))
}

fn root_factor(k: &MultiplicityBC, lambda: &[Complex64], root: PositiveRoot) -> Result<Complex64> {
    let km = Complex64::new(k.k_m() as f64, 0.0);
    match root {
        PositiveRoot::Short(j) => gamma_ratio(lambda[j], k.k_s()),
        PositiveRoot::Long(j) => gamma_ratio((lambda[j] + k.k_s()) / 2.0, k.k_l()),
        PositiveRoot::Diff(i, j) => gamma_ratio((lambda[i] - lambda[j]) / 2.0, km),
        PositiveRoot::Sum(i, j) => gamma_ratio((lambda[i] + lambda[j]) / 2.0, km),
    }
}

fn check_dims(k: &MultiplicityBC, lambda: &SpectralParam) -> Result<()> {
    if lambda.len() != k.n() {
        return Err(Error::Parameter(format!(
            "lambda has {} components, rank is {}",
            lambda.len(),
            k.n()
        )));
    }
    Ok(())
}

/// c̃(λ, k) = ∏ Γ((λ, α^∨) + ½k_{α/2}) / Γ((λ, α^∨) + ½k_{α/2} + k_α) over the
/// selected positive roots, with k_{α/2} = 0 when α/2 is not a root.
///
/// Each long root 2e_j carries an extra factor π^{−1/2}, so that the pair
/// e_j, 2e_j contributes 2^{1−2k_s−2k_l} Γ(k_s + k_l + ½)^{−1} c_{α,β}(λ_j).
/// The normalized c-function does not see this constant.
pub fn c_tilde(k: &MultiplicityBC, lambda: &SpectralParam, subset: RootSubset) -> Result<Complex64> {
    check_dims(k, lambda)?;
    subset.validate(k.n())?;
    let l = lambda.as_slice();
    let mut acc = Complex64::new(1.0, 0.0);
    for root in positive_roots(k.n()) {
        if !subset.contains(root) {
            continue;
        }
        acc *= root_factor(k, l, root)?;
        if matches!(root, PositiveRoot::Long(_)) {
            acc /= PI.sqrt();
        }
    }
    check_finite(acc, "c-tilde")
}

/// c̃(ρ(k), k); for k_m = 0 the middle factors are replaced by their limits
/// as k_m → 0.
pub fn c_tilde_at_rho(k: &MultiplicityBC, subset: RootSubset) -> Result<Complex64> {
    subset.validate(k.n())?;
    let r = rho(k);
    let l = r.as_slice();
    let n = k.n();
    let mut acc = Complex64::new(1.0, 0.0);
    for root in positive_roots(n) {
        if !subset.contains(root) {
            continue;
        }
        let factor = match (k.k_m(), root) {
            // Γ(d k_m) / Γ((d + 1) k_m) → (d + 1)/d, d = j − i.
            (0, PositiveRoot::Diff(i, j)) => {
                let d = (j - i) as f64;
                Complex64::new((d + 1.0) / d, 0.0)
            }
            // Argument ρ_1 + d k_m with d = 2n − i − j (1-based); the limit is
            // 1 unless ρ_1 sits on a Gamma pole.
            (0, PositiveRoot::Sum(i, j)) => {
                let d = (2 * n - (i + 1) - (j + 1)) as f64;
                if matches!(near_integer(k.rho1(), POLE_TOL), Some(m) if m <= 0) && d > 0.0 {
                    Complex64::new((d + 1.0) / d, 0.0)
                } else if d == 0.0 {
                    return Err(Error::ZeroDenominator(
                        "c-tilde at rho has an undetermined middle factor".into(),
                    ));
                } else {
                    Complex64::new(1.0, 0.0)
                }
            }
            _ => root_factor(k, l, root)?,
        };
        acc *= factor;
        if matches!(root, PositiveRoot::Long(_)) {
            acc /= PI.sqrt();
        }
    }
    check_finite(acc, "c-tilde at rho")
}

/// c(λ, k) = c̃(λ, k) / c̃(ρ(k), k).
pub fn c_normalized(k: &MultiplicityBC, lambda: &SpectralParam, subset: RootSubset) -> Result<Complex64> {
    let den = c_tilde_at_rho(k, subset)?;
    if den.norm() < f64::MIN_POSITIVE {
        return Err(Error::ZeroDenominator(format!(
            "c-tilde(rho(k), k) vanishes for k = ({}, {}, {})",
            k.k_s(),
            k.k_m(),
            k.k_l()
        )));
    }
    Ok(c_tilde(k, lambda, subset)? / den)
}

/// The constant B = 2^{2n(n−1)} ∏_{i=1}^{n−1} (α + i)^{n−i} i! of the
/// determinant formula.
///
/// The sign factor (−1)^{n(n−1)/2} that appears in print is left out: the
/// constant fixed by F(λ, k; e) = 1, and equally the c-function quotient
/// [`constant_b_from_c_function`], are both positive.
pub fn constant_b(k: &MultiplicityBC) -> Result<Complex64> {
    k.check_alpha_admissible()?;
    let n = k.n();
    let alpha = k.alpha();
    let mut b = Complex64::new(2f64.powi((2 * n * (n - 1)) as i32), 0.0);
    let mut fact = 1.0;
    for i in 1..n {
        fact *= i as f64;
        b *= (alpha + i as f64).powu((n - i) as u32) * fact;
    }
    Ok(b)
}

/// 2^{n(n−1)} / [c̃(ρ(k), k) (2^{2k_s+2k_l−1} Γ(k_s + k_l + ½))ⁿ], the
/// constant obtained by summing the Weyl group in closed form (k_m = 1).
pub fn constant_b_from_c_function(k: &MultiplicityBC) -> Result<Complex64> {
    if k.k_m() != 1 {
        return Err(Error::Parameter("the B constant belongs to k_m = 1".into()));
    }
    let n = k.n() as f64;
    let ct = c_tilde_at_rho(k, RootSubset::Full)?;
    let ln2 = std::f64::consts::LN_2;
    let a = k.alpha() + 1.0;
    let log_rank1 = (2.0 * k.k_s() + 2.0 * k.k_l() - 1.0) * ln2 + log_gamma(a)?;
    let log = n * (n - 1.0) * ln2 - n * log_rank1;
    check_finite(log.exp() / ct, "B from c-function")
}

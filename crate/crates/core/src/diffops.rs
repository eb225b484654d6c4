//! Finite-difference realizations of the radial operators in t-coordinates:
//!
//! L(k) = Σ_j [∂_j² + 2(k_s coth t_j + 2k_l coth 2t_j) ∂_j]
//!        + 2k_m Σ_{i<j} [coth(t_i − t_j)(∂_i − ∂_j) + coth(t_i + t_j)(∂_i + ∂_j)],
//!
//! the rank-one blocks L_j (the first sum, one j at a time), the conjugated
//! operators D_p = Δ_m^{−k_m} p(L_1, …, L_n) Δ_m^{k_m}, and their rational
//! counterparts in which coth x becomes 1/x, Δ_m becomes Δ_{m,rat} and
//! L_j^rat = ∂_j² + ((2k_s + 2k_l)/t_j) ∂_j.
//!
//! On e^{(x, t)} the leading part of L(k) gives Σ x_j² + 2ρ_j x_j, which is
//! where the middle-root coefficients above come from; the eigenvalue of
//! F is then Σ_j (λ_j² − ρ_j²).

use itertools::Itertools;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::roots::{delta_m, delta_m_rational, MultiplicityBC};

/// A scalar field on ℝⁿ.
pub type Field<'a> = dyn Fn(&[f64]) -> Result<Complex64> + 'a;

/// Smallest admissible step.
pub const MIN_STEP: f64 = 1e-6;

/// Relative disagreement between step h and h/2 beyond which nested
/// differencing is declared unreliable.
pub const BLOWUP_TOL: f64 = 1e-6;

/// Longest operator word (product of L_j) accepted by [`apply_dp`].
pub const MAX_DEPTH: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StencilConfig {
    pub h: f64,
    pub richardson: bool,
    /// Order of the central differences, 2 or 4.
    pub scheme: u8,
}

impl Default for StencilConfig {
    fn default() -> Self {
        StencilConfig {
            h: 1e-4,
            richardson: true,
            scheme: 2,
        }
    }
}

impl StencilConfig {
    pub fn with_step(h: f64) -> Self {
        StencilConfig {
            h,
            ..StencilConfig::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.h.is_finite() && self.h >= MIN_STEP) {
            return Err(Error::Parameter(format!(
                "step h = {} must be finite and at least {MIN_STEP}",
                self.h
            )));
        }
        if self.scheme != 2 && self.scheme != 4 {
            return Err(Error::Parameter(format!("scheme {} is not 2 or 4", self.scheme)));
        }
        Ok(())
    }

    fn halved(&self) -> Self {
        StencilConfig {
            h: self.h / 2.0,
            ..*self
        }
    }
}

/// Σ_terms c · ∏_j p_j^{a_j}, a polynomial in the elementary symmetric
/// functions p_1, …, p_n.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricPolynomial {
    n: usize,
    terms: Vec<(Complex64, Vec<u32>)>,
}

impl SymmetricPolynomial {
    /// `terms` pairs a coefficient with the exponents (a_1, …, a_n).
    pub fn new(n: usize, terms: Vec<(Complex64, Vec<u32>)>) -> Result<Self> {
        if let Some((_, e)) = terms.iter().find(|(_, e)| e.len() != n) {
            return Err(Error::Parameter(format!(
                "exponent vector {e:?} does not have {n} entries"
            )));
        }
        Ok(SymmetricPolynomial { n, terms })
    }

    /// The j-th elementary symmetric function, 1 ≤ j ≤ n.
    pub fn elementary(n: usize, j: usize) -> Result<Self> {
        if j == 0 || j > n {
            return Err(Error::Parameter(format!("p_{j} does not exist for n = {n}")));
        }
        let mut e = vec![0; n];
        e[j - 1] = 1;
        SymmetricPolynomial::new(n, vec![(Complex64::new(1.0, 0.0), e)])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Degree in the variables x_1, …, x_n.
    pub fn degree(&self) -> usize {
        self.terms
            .iter()
            .map(|(_, e)| e.iter().enumerate().map(|(j, &a)| (j + 1) * a as usize).sum())
            .max()
            .unwrap_or(0)
    }

    /// Expansion into words: p(L_1, …, L_n) = Σ c · L_{w_1} ⋯ L_{w_d}.
    pub fn words(&self) -> Vec<(Complex64, Vec<usize>)> {
        let mut out = Vec::new();
        for (c, exps) in &self.terms {
            let mut partial: Vec<(Complex64, Vec<usize>)> = vec![(*c, Vec::new())];
            for (j, &a) in exps.iter().enumerate() {
                for _ in 0..a {
                    let mut next = Vec::new();
                    for (cw, w) in &partial {
                        for subset in (0..self.n).combinations(j + 1) {
                            let mut w2 = w.clone();
                            w2.extend(subset);
                            next.push((*cw, w2));
                        }
                    }
                    partial = next;
                }
            }
            out.extend(partial);
        }
        out
    }
}

/// Distance from t to the nearest hyperplane t_j = 0 or t_i = ±t_j.
fn wall_distance(t: &[f64]) -> f64 {
    let mut d = t.iter().map(|x| x.abs()).fold(f64::INFINITY, f64::min);
    for [a, b] in t.iter().array_combinations() {
        d = d.min((a - b).abs()).min((a + b).abs());
    }
    d
}

fn check_point(t: &[f64], cfg: &StencilConfig) -> Result<()> {
    cfg.validate()?;
    if wall_distance(t) < 10.0 * cfg.h {
        return Err(Error::SingularityTooClose(format!(
            "t = {t:?} is within 10h = {} of a singular hyperplane",
            10.0 * cfg.h
        )));
    }
    Ok(())
}

fn shifted(t: &[f64], j: usize, d: f64) -> Vec<f64> {
    let mut x = t.to_vec();
    x[j] += d;
    x
}

/// (∂_j f, ∂_j² f) at t by a single central stencil of step h.
fn raw_partials(f: &Field, t: &[f64], f0: Complex64, j: usize, h: f64, scheme: u8) -> Result<(Complex64, Complex64)> {
    let fp = f(&shifted(t, j, h))?;
    let fm = f(&shifted(t, j, -h))?;
    if scheme == 2 {
        return Ok(((fp - fm) / (2.0 * h), (fp - 2.0 * f0 + fm) / (h * h)));
    }
    let fp2 = f(&shifted(t, j, 2.0 * h))?;
    let fm2 = f(&shifted(t, j, -2.0 * h))?;
    Ok((
        (-fp2 + 8.0 * fp - 8.0 * fm + fm2) / (12.0 * h),
        (-fp2 + 16.0 * fp - 30.0 * f0 + 16.0 * fm - fm2) / (12.0 * h * h),
    ))
}

/// (∂_j f, ∂_j² f), Richardson-extrapolated over h and h/2 when enabled.
fn partials(f: &Field, t: &[f64], f0: Complex64, j: usize, cfg: &StencilConfig) -> Result<(Complex64, Complex64)> {
    let coarse = raw_partials(f, t, f0, j, cfg.h, cfg.scheme)?;
    if !cfg.richardson {
        return Ok(coarse);
    }
    let fine = raw_partials(f, t, f0, j, cfg.h / 2.0, cfg.scheme)?;
    let w = 2f64.powi(cfg.scheme as i32);
    Ok(((w * fine.0 - coarse.0) / (w - 1.0), (w * fine.1 - coarse.1) / (w - 1.0)))
}

fn coth(x: f64) -> f64 {
    1.0 / x.tanh()
}

/// Coefficient of ∂_j in the rank-one block: 2(k_s coth t + 2k_l coth 2t),
/// or (2k_s + 2k_l)/t in the rational case.
fn radial_coeff(k: &MultiplicityBC, t: f64, rational: bool) -> Complex64 {
    if rational {
        (2.0 * k.k_s() + 2.0 * k.k_l()) / t
    } else {
        2.0 * (k.k_s() * coth(t) + 2.0 * k.k_l() * coth(2.0 * t))
    }
}

fn apply_full(k: &MultiplicityBC, f: &Field, t: &[f64], cfg: &StencilConfig, rational: bool) -> Result<Complex64> {
    check_point(t, cfg)?;
    let n = t.len();
    let f0 = f(t)?;
    let mut grad = Vec::with_capacity(n);
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..n {
        let (d1, d2) = partials(f, t, f0, j, cfg)?;
        acc += d2 + radial_coeff(k, t[j], rational) * d1;
        grad.push(d1);
    }
    if k.k_m() == 1 {
        let w = |x: f64| if rational { 1.0 / x } else { coth(x) };
        for i in 0..n {
            for j in i + 1..n {
                acc += 2.0 * (w(t[i] - t[j]) * (grad[i] - grad[j]) + w(t[i] + t[j]) * (grad[i] + grad[j]));
            }
        }
    }
    Ok(acc)
}

/// (L(k) f)(t) by central differences.
pub fn apply_l(k: &MultiplicityBC, f: &Field, t: &[f64], cfg: &StencilConfig) -> Result<Complex64> {
    apply_full(k, f, t, cfg, false)
}

/// (L(k)^rat f)(t): L(k) with every coth x replaced by 1/x.
pub fn apply_l_rational(k: &MultiplicityBC, f: &Field, t: &[f64], cfg: &StencilConfig) -> Result<Complex64> {
    apply_full(k, f, t, cfg, true)
}

fn apply_block(
    k: &MultiplicityBC,
    j: usize,
    f: &Field,
    t: &[f64],
    cfg: &StencilConfig,
    rational: bool,
) -> Result<Complex64> {
    check_point(t, cfg)?;
    let f0 = f(t)?;
    let (d1, d2) = partials(f, t, f0, j, cfg)?;
    Ok(d2 + radial_coeff(k, t[j], rational) * d1)
}

/// (L_j f)(t) for the rank-one block acting on coordinate j.
pub fn apply_lj(k: &MultiplicityBC, j: usize, f: &Field, t: &[f64], cfg: &StencilConfig) -> Result<Complex64> {
    apply_block(k, j, f, t, cfg, false)
}

fn apply_word(
    k: &MultiplicityBC,
    word: &[usize],
    g: &Field,
    t: &[f64],
    cfg: &StencilConfig,
    rational: bool,
) -> Result<Complex64> {
    match word.split_first() {
        None => g(t),
        Some((&j, rest)) => {
            let inner = |x: &[f64]| apply_word(k, rest, g, x, cfg, rational);
            apply_block(k, j, &inner, t, cfg, rational)
        }
    }
}

fn apply_conjugated(
    k: &MultiplicityBC,
    p: &SymmetricPolynomial,
    f: &Field,
    t: &[f64],
    cfg: &StencilConfig,
    rational: bool,
) -> Result<Complex64> {
    if p.n() != t.len() {
        return Err(Error::Parameter(format!(
            "polynomial in {} variables at a point of rank {}",
            p.n(),
            t.len()
        )));
    }
    let words = p.words();
    if let Some((_, w)) = words.iter().find(|(_, w)| w.len() > MAX_DEPTH) {
        return Err(Error::Size(format!(
            "operator word of length {} exceeds {MAX_DEPTH}",
            w.len()
        )));
    }
    let weight = |x: &[f64]| -> f64 {
        if k.k_m() == 0 {
            1.0
        } else if rational {
            delta_m_rational(x)
        } else {
            delta_m(x)
        }
    };
    let g = |x: &[f64]| -> Result<Complex64> { Ok(weight(x) * f(x)?) };
    let mut acc = Complex64::new(0.0, 0.0);
    for (c, w) in &words {
        acc += c * apply_word(k, w, &g, t, cfg, rational)?;
    }
    Ok(acc / weight(t))
}

fn with_blowup_check(
    compute: impl Fn(&StencilConfig) -> Result<Complex64>,
    f0: Complex64,
    cfg: &StencilConfig,
) -> Result<Complex64> {
    let a = compute(cfg)?;
    let half = cfg.halved();
    if half.h < MIN_STEP {
        return Ok(a);
    }
    let b = compute(&half)?;
    let scale = a.norm().max(b.norm()).max(f0.norm());
    if (a - b).norm() > BLOWUP_TOL * scale {
        return Err(Error::StencilBlowup(format!(
            "results at h = {} and h/2 differ by {:.3e} relative",
            cfg.h,
            (a - b).norm() / scale
        )));
    }
    Ok(b)
}

/// (D_p f)(t) with D_p = Δ_m^{−k_m} p(L_1, …, L_n) Δ_m^{k_m}, evaluated at
/// steps h and h/2; the finer value is returned when the two agree to
/// [`BLOWUP_TOL`].
pub fn apply_dp(
    k: &MultiplicityBC,
    p: &SymmetricPolynomial,
    f: &Field,
    t: &[f64],
    cfg: &StencilConfig,
) -> Result<Complex64> {
    let f0 = f(t)?;
    with_blowup_check(|c| apply_conjugated(k, p, f, t, c, false), f0, cfg)
}

/// (D_p f)(t) at the configured step only.
pub fn apply_dp_single(
    k: &MultiplicityBC,
    p: &SymmetricPolynomial,
    f: &Field,
    t: &[f64],
    cfg: &StencilConfig,
) -> Result<Complex64> {
    apply_conjugated(k, p, f, t, cfg, false)
}

/// Rational analogue Δ_rat^{−k_m} p(L_1^rat, …, L_n^rat) Δ_rat^{k_m}.
pub fn apply_dp_rational(
    k: &MultiplicityBC,
    p: &SymmetricPolynomial,
    f: &Field,
    t: &[f64],
    cfg: &StencilConfig,
) -> Result<Complex64> {
    let f0 = f(t)?;
    with_blowup_check(|c| apply_conjugated(k, p, f, t, c, true), f0, cfg)
}

/// |D_p(D_q f) − D_q(D_p f)| at t, each inner result treated as an opaque
/// function, together with the larger of the two magnitudes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CommutatorResidual {
    pub residual: f64,
    pub magnitude: f64,
}

impl CommutatorResidual {
    pub fn relative(&self) -> f64 {
        if self.magnitude == 0.0 {
            self.residual
        } else {
            self.residual / self.magnitude
        }
    }
}

pub fn commutator_residual(
    k: &MultiplicityBC,
    p: &SymmetricPolynomial,
    q: &SymmetricPolynomial,
    f: &Field,
    t: &[f64],
    cfg: &StencilConfig,
) -> Result<CommutatorResidual> {
    let dq_f = |x: &[f64]| apply_conjugated(k, q, f, x, cfg, false);
    let dp_f = |x: &[f64]| apply_conjugated(k, p, f, x, cfg, false);
    let pq = apply_conjugated(k, p, &dq_f, t, cfg, false)?;
    let qp = apply_conjugated(k, q, &dp_f, t, cfg, false)?;
    Ok(CommutatorResidual {
        residual: (pq - qp).norm(),
        magnitude: pq.norm().max(qp.norm()),
    })
}

/// Smooth bump exp(1 − 1/(1 − r²)) for r = |t − center| / radius < 1,
/// zero outside.
pub fn bump(center: Vec<f64>, radius: f64) -> impl Fn(&[f64]) -> Result<Complex64> {
    move |t: &[f64]| {
        let r2: f64 = t.iter().zip(&center).map(|(a, b)| (a - b).powi(2)).sum::<f64>() / (radius * radius);
        let v = if r2 < 1.0 { (1.0 - 1.0 / (1.0 - r2)).exp() } else { 0.0 };
        Ok(Complex64::new(v, 0.0))
    }
}

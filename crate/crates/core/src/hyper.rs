//! Closed-form evaluators for k_m ∈ {0, 1}: the product form of the
//! Harish-Chandra series, the hypergeometric function F as a determinant
//! (k_m = 1) or permanent (k_m = 0) of rank-one Jacobi functions, the
//! Θ-spherical function for Θ of type A_{n−1}, and the Bessel function of
//! type BC_n.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hcseries::{check_generic, DEFAULT_ORDER};
use crate::jacobi::{jacobi_phi, jacobi_phi_asymptotic};
use crate::linalg::{abs_permanent, determinant, permanent};
use crate::roots::{
    c_normalized, constant_b, delta_m, delta_m_rational, rho, weyl_elements, ChamberPoint, MultiplicityBC, RootSubset,
    SpectralParam, DEGENERACY_TOL,
};
use crate::scalar::{bessel_j_normalized, check_finite};

/// The power-series form of the determinant is used while every
/// |y_j| = sinh²t_j (or t_j²) stays below this bound …
const SERIES_Y_MAX: f64 = 0.25;
/// … and max|λ_i²| · max|y_j| stays below this one.
const SERIES_SY_MAX: f64 = 16.0;
const SERIES_TERMS_MAX: usize = 2000;

/// What [`evaluate`] computes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    /// The hypergeometric function F(λ, k; a_t).
    F,
    /// The Harish-Chandra series Φ(λ, k; a_t) in product form.
    PhiSeries,
    /// The Θ-spherical function for Θ = {e_1 − e_2, …, e_{n−1} − e_n}.
    FTheta,
    /// The Bessel function of type BC_n.
    BesselBC,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalRequest {
    pub k: MultiplicityBC,
    pub lambda: SpectralParam,
    pub t: ChamberPoint,
    pub target: Target,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalResult {
    pub value: Complex64,
    /// Size of the full determinant or permanent expansion divided by the
    /// size of its value; roughly how much relative rounding error is
    /// amplified. 1 for plain products.
    pub condition_estimate: f64,
    /// Set when λ was degenerate and a confluent form replaced the quotient
    /// det / ∏(λ_i² − λ_j²).
    pub degenerate_path: bool,
}

fn check_shape(k: &MultiplicityBC, lambda: &SpectralParam, t: &ChamberPoint) -> Result<()> {
    if lambda.len() != k.n() || t.len() != k.n() {
        return Err(Error::Parameter(format!(
            "rank {} but lambda has {} and t has {} components",
            k.n(),
            lambda.len(),
            t.len()
        )));
    }
    Ok(())
}

fn matrix(
    lambda: &[Complex64],
    t: &[f64],
    mut f: impl FnMut(Complex64, f64) -> Result<Complex64>,
) -> Result<DMatrix<Complex64>> {
    let n = lambda.len();
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = f(lambda[i], t[j])?;
        }
    }
    Ok(m)
}

fn ratio(expansion: f64, value: Complex64) -> f64 {
    if value.norm() == 0.0 {
        f64::INFINITY
    } else {
        expansion / value.norm()
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

/// ∏_{i<j} (x_i − x_j), optionally skipping some pairs.
fn pair_product(x: &[Complex64], skip: &[(usize, usize)]) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            if !skip.contains(&(i, j)) {
                acc *= x[i] - x[j];
            }
        }
    }
    acc
}

/// For M_ij = Σ_m a_m(s_i) y_j^m with
/// a_m(s) = ∏_{r<m} (x_r − s) / (4(α + 1 + r)(r + 1)),
/// returns det G where det M = ∏_{i<j} (s_j − s_i)(y_j − y_i) · det G.
///
/// G_kl is the divided difference of M over s_1..s_k and y_1..y_l. On the
/// y side these are complete homogeneous symmetric polynomials; on the s
/// side the product form of a_m is differenced factor by factor with the
/// Leibniz rule, so coincident s_i are allowed.
fn confluent_det(
    alpha: Complex64,
    node: impl Fn(usize) -> Complex64,
    s: &[Complex64],
    y: &[f64],
) -> Result<(Complex64, f64)> {
    let n = s.len();
    let zero = Complex64::new(0.0, 0.0);
    // dd[a][b]: divided difference of the current a_m over s_a..s_b.
    let mut dd = vec![vec![zero; n]; n];
    for (a, row) in dd.iter_mut().enumerate() {
        row[a] = Complex64::new(1.0, 0.0);
    }
    // h[l][d] = h_d(y_1, …, y_l), grown one degree per step.
    let mut h: Vec<Vec<f64>> = vec![vec![1.0]; n];
    let mut g = DMatrix::from_element(n, n, zero);
    let mut quiet = 0;
    for m in 0..SERIES_TERMS_MAX {
        if m > 0 {
            for l in 0..n {
                let prev = if l == 0 { 0.0 } else { h[l - 1][m] };
                let v = prev + y[l] * h[l][m - 1];
                h[l].push(v);
            }
        }
        let mut largest_term = 0.0f64;
        for k in 0..n.min(m + 1) {
            for l in 0..n.min(m + 1) {
                let term = dd[0][k] * h[l][m - l];
                g[(k, l)] += term;
                largest_term = largest_term.max(term.norm());
            }
        }
        let largest_entry = g.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if m >= 2 * n && largest_term <= 1e-17 * largest_entry {
            quiet += 1;
            if quiet >= 3 {
                let det = determinant(&g);
                return Ok((det, ratio(abs_permanent(&g), det)));
            }
        } else {
            quiet = 0;
        }
        let q = (4.0 * (alpha + 1.0 + m as f64) * (m as f64 + 1.0)).inv();
        let x = node(m);
        for a in 0..n {
            for b in a..n {
                let next = if b > a { dd[a + 1][b] } else { zero };
                dd[a][b] = ((x - s[a]) * dd[a][b] - next) * q;
            }
        }
    }
    Err(Error::NonConvergence(format!(
        "confluent determinant series after {SERIES_TERMS_MAX} terms"
    )))
}

fn use_series_form(s: &[Complex64], y_abs_max: f64, y_bound: f64) -> bool {
    let s_max = s.iter().map(|z| z.norm()).fold(0.0, f64::max);
    s.len() >= 2 && y_abs_max <= y_bound && s_max * y_abs_max <= SERIES_SY_MAX
}

/// Disjoint degenerate pairs, or an error when three or more λ_i² coincide.
fn disjoint_degenerate_pairs(lambda: &SpectralParam) -> Result<Vec<(usize, usize)>> {
    let pairs = lambda.degenerate_pairs();
    let mut seen = vec![false; lambda.len()];
    for &(i, j) in &pairs {
        if seen[i] || seen[j] {
            return Err(Error::DegenerateLambda(format!(
                "three or more coincident lambda_j^2 in {:?}",
                lambda.as_slice()
            )));
        }
        seen[i] = true;
        seen[j] = true;
    }
    Ok(pairs)
}

/// Φ(λ, k; a_t) = Δ_m(a_t)^{−k_m} ∏_j Φ^{(α,β)}_{−iλ_j}(t_j).
pub fn phi_product(k: &MultiplicityBC, lambda: &SpectralParam, t: &ChamberPoint) -> Result<Complex64> {
    check_shape(k, lambda, t)?;
    check_generic(lambda, DEFAULT_ORDER).map_err(|e| Error::DegenerateLambda(e.to_string()))?;
    let p = k.jacobi();
    let mut acc = Complex64::new(1.0, 0.0);
    for (&l, &tj) in lambda.as_slice().iter().zip(t.as_slice()) {
        acc *= jacobi_phi_asymptotic(&p, l, tj)?;
    }
    if k.k_m() == 1 {
        acc /= delta_m(t.as_slice());
    }
    check_finite(acc, "Harish-Chandra series")
}

/// F(λ, k; a_t) = B det(φ_{iλ_i}(t_j)) / [∏_{i<j}(λ_i² − λ_j²) Δ_m(a_t)] for
/// k_m = 1.
///
/// Near the origin, and for degenerate λ, the quotient is formed from the
/// power series of φ in −sinh²t instead of from a numerically cancelling
/// determinant. Degenerate λ farther out replace one row of each
/// coincident pair by a derivative in λ².
pub fn f_determinant(k: &MultiplicityBC, lambda: &SpectralParam, t: &ChamberPoint) -> Result<EvalResult> {
    check_shape(k, lambda, t)?;
    if k.k_m() != 1 {
        return Err(Error::Parameter("determinant formula needs k_m = 1".into()));
    }
    k.check_alpha_admissible()?;
    let p = k.jacobi();
    let l = lambda.as_slice();
    let tt = t.as_slice();
    let n = k.n();
    if n == 1 {
        let value = jacobi_phi(&p, l[0], tt[0])?;
        return Ok(EvalResult {
            value,
            condition_estimate: 1.0,
            degenerate_path: false,
        });
    }
    let b = constant_b(k)?;
    let s = lambda.squares();
    let pairs = disjoint_degenerate_pairs(lambda)?;
    let degenerate_path = !pairs.is_empty();
    let half_n = n * (n - 1) / 2;

    let y_max = tt[0].sinh().powi(2);
    if use_series_form(&s, y_max, SERIES_Y_MAX) {
        let y: Vec<f64> = tt.iter().map(|x| -x.sinh().powi(2)).collect();
        let rho1 = k.rho1();
        let (det_g, cond) = confluent_det(k.alpha(), |r| (rho1 + 2.0 * r as f64).powi(2), &s, &y)?;
        let sign = if half_n.is_multiple_of(2) { 1.0 } else { -1.0 };
        let value = b * sign * det_g / 4f64.powi(half_n as i32);
        return Ok(EvalResult {
            value: check_finite(value, "F")?,
            condition_estimate: cond,
            degenerate_path,
        });
    }

    let mut m = matrix(l, tt, |lam, x| jacobi_phi(&p, lam, x))?;
    for &(i, j) in &pairs {
        let mid = (s[i] + s[j]) / 2.0;
        let h = 1e-4 * mid.norm().max(1.0);
        for c in 0..n {
            let up = jacobi_phi(&p, (mid + h).sqrt(), tt[c])?;
            let down = jacobi_phi(&p, (mid - h).sqrt(), tt[c])?;
            m[(j, c)] = (up - down) / (2.0 * h);
        }
    }
    let det = determinant(&m);
    let sign = if pairs.len() % 2 == 0 { 1.0 } else { -1.0 };
    let value = b * sign * det / (pair_product(&s, &pairs) * delta_m(tt));
    Ok(EvalResult {
        value: check_finite(value, "F")?,
        condition_estimate: ratio(abs_permanent(&m), det),
        degenerate_path,
    })
}

/// F(λ, k; a_t) = perm(φ_{iλ_i}(t_j)) / n! for k_m = 0.
pub fn f_permanent(k: &MultiplicityBC, lambda: &SpectralParam, t: &ChamberPoint) -> Result<EvalResult> {
    check_shape(k, lambda, t)?;
    if k.k_m() != 0 {
        return Err(Error::Parameter("permanent formula needs k_m = 0".into()));
    }
    k.check_alpha_admissible()?;
    let p = k.jacobi();
    let m = matrix(lambda.as_slice(), t.as_slice(), |lam, x| jacobi_phi(&p, lam, x))?;
    let perm = permanent(&m);
    Ok(EvalResult {
        value: check_finite(perm / factorial(k.n()), "F")?,
        condition_estimate: ratio(abs_permanent(&m), perm),
        degenerate_path: false,
    })
}

/// Θ-spherical function for Θ = {e_1 − e_2, …, e_{n−1} − e_n} and Re λ_i > 0:
/// π(ρ)/π(λ) · det(Φ_{−iλ_i}(t_j)) / Δ_m for k_m = 1, perm(Φ_{−iλ_i}(t_j)) / n!
/// for k_m = 0, with π(x) = ∏_{i<j}(x_i − x_j).
pub fn f_theta(k: &MultiplicityBC, lambda: &SpectralParam, t: &ChamberPoint, theta: RootSubset) -> Result<EvalResult> {
    check_shape(k, lambda, t)?;
    if theta != RootSubset::ThetaAn1 {
        return Err(Error::Parameter(format!(
            "closed form is available for the A_(n-1) subset only, got {theta:?}"
        )));
    }
    let l = lambda.as_slice();
    if let Some(bad) = l.iter().find(|z| z.re <= 0.0) {
        return Err(Error::HalfPlane(format!("lambda component {bad}")));
    }
    let p = k.jacobi();
    let tt = t.as_slice();
    let m = matrix(l, tt, |lam, x| jacobi_phi_asymptotic(&p, lam, x))?;
    if k.k_m() == 0 {
        let perm = permanent(&m);
        return Ok(EvalResult {
            value: check_finite(perm / factorial(k.n()), "F_Theta")?,
            condition_estimate: ratio(abs_permanent(&m), perm),
            degenerate_path: false,
        });
    }
    let tol = DEGENERACY_TOL * lambda.scale().sqrt();
    for i in 0..l.len() {
        for j in i + 1..l.len() {
            if (l[i] - l[j]).norm() <= tol {
                return Err(Error::DegenerateLambda(format!(
                    "lambda_{} = lambda_{} = {}",
                    i + 1,
                    j + 1,
                    l[i]
                )));
            }
        }
    }
    let r = rho(k);
    let det = determinant(&m);
    let value = pair_product(r.as_slice(), &[]) / pair_product(l, &[]) * det / delta_m(tt);
    Ok(EvalResult {
        value: check_finite(value, "F_Theta")?,
        condition_estimate: ratio(abs_permanent(&m), det),
        degenerate_path: false,
    })
}

/// Bessel function of type BC_n: B det(𝒥_α(iλ_i t_j)) / [∏(λ_i² − λ_j²)
/// Δ_rat(t)] for k_m = 1, perm(𝒥_α(iλ_i t_j)) / n! for k_m = 0.
pub fn bessel_bcn(k: &MultiplicityBC, lambda: &SpectralParam, t: &ChamberPoint) -> Result<EvalResult> {
    check_shape(k, lambda, t)?;
    k.check_alpha_admissible()?;
    let l = lambda.as_slice();
    if let Some(j) = l.iter().position(|z| z.norm() == 0.0) {
        return Err(Error::Parameter(format!("lambda_{} = 0", j + 1)));
    }
    let alpha = k.alpha();
    let tt = t.as_slice();
    let n = k.n();
    let bessel = |lam: Complex64, x: f64| bessel_j_normalized(alpha, Complex64::new(0.0, 1.0) * lam * x);
    if k.k_m() == 0 {
        let m = matrix(l, tt, bessel)?;
        let perm = permanent(&m);
        return Ok(EvalResult {
            value: check_finite(perm / factorial(n), "Bessel")?,
            condition_estimate: ratio(abs_permanent(&m), perm),
            degenerate_path: false,
        });
    }
    if n == 1 {
        return Ok(EvalResult {
            value: bessel(l[0], tt[0])?,
            condition_estimate: 1.0,
            degenerate_path: false,
        });
    }
    let b = constant_b(k)?;
    let s = lambda.squares();
    let half_n = n * (n - 1) / 2;
    let y_max = tt[0] * tt[0];
    let degenerate_path = !lambda.is_regular();
    if use_series_form(&s, y_max, f64::INFINITY) {
        disjoint_degenerate_pairs(lambda)?;
        let y: Vec<f64> = tt.iter().map(|x| -x * x).collect();
        let (det_g, cond) = confluent_det(alpha, |_| Complex64::new(0.0, 0.0), &s, &y)?;
        let sign = if half_n.is_multiple_of(2) { 1.0 } else { -1.0 };
        return Ok(EvalResult {
            value: check_finite(b * sign * det_g / 4f64.powi(half_n as i32), "Bessel")?,
            condition_estimate: cond,
            degenerate_path,
        });
    }
    if degenerate_path {
        return Err(Error::DegenerateLambda(format!("coincident lambda_j^2 in {:?}", l)));
    }
    let m = matrix(l, tt, bessel)?;
    let det = determinant(&m);
    let value = b * det / (pair_product(&s, &[]) * delta_m_rational(tt));
    Ok(EvalResult {
        value: check_finite(value, "Bessel")?,
        condition_estimate: ratio(abs_permanent(&m), det),
        degenerate_path: false,
    })
}

/// Dispatches a request on its target and on k_m.
pub fn evaluate(req: &EvalRequest) -> Result<EvalResult> {
    let EvalRequest { k, lambda, t, target } = req;
    check_shape(k, lambda, t)?;
    match target {
        Target::F if k.k_m() == 1 => f_determinant(k, lambda, t),
        Target::F => f_permanent(k, lambda, t),
        Target::PhiSeries => Ok(EvalResult {
            value: phi_product(k, lambda, t)?,
            condition_estimate: 1.0,
            degenerate_path: false,
        }),
        Target::FTheta => f_theta(k, lambda, t, RootSubset::ThetaAn1),
        Target::BesselBC => bessel_bcn(k, lambda, t),
    }
}

/// Σ_{w∈W} c(wλ, k) Φ(wλ, k; ·) with the Harish-Chandra series supplied by
/// the caller.
pub fn weyl_sum(
    k: &MultiplicityBC,
    lambda: &SpectralParam,
    mut series: impl FnMut(&SpectralParam) -> Result<Complex64>,
) -> Result<Complex64> {
    let mut acc = Complex64::new(0.0, 0.0);
    for w in weyl_elements(k.n())? {
        let wl = SpectralParam::new(w.act(lambda.as_slice()))?;
        let c = c_normalized(k, &wl, RootSubset::Full)?;
        if c != Complex64::new(0.0, 0.0) {
            acc += c * series(&wl)?;
        }
    }
    Ok(acc)
}

/// Σ_{σ∈S_n} c_Θ(σλ, k) Φ(σλ, k; ·) for Θ of type A_{n−1}.
pub fn theta_sum(
    k: &MultiplicityBC,
    lambda: &SpectralParam,
    mut series: impl FnMut(&SpectralParam) -> Result<Complex64>,
) -> Result<Complex64> {
    let mut acc = Complex64::new(0.0, 0.0);
    for w in weyl_elements(k.n())?.filter(|w| w.signs.iter().all(|&e| e > 0)) {
        let wl = SpectralParam::new(w.act(lambda.as_slice()))?;
        acc += c_normalized(k, &wl, RootSubset::ThetaAn1)? * series(&wl)?;
    }
    Ok(acc)
}

/// Limit of e^{(ρ−λ)(log a_u)} F_Θ(λ, k; a_{t+u}) as u → ∞:
/// e^{−ρ_1 Σt_j} times π(ρ)/π(λ) · det(e^{λ_i t_j}) / π(e^{2t_1}, …, e^{2t_n})
/// for k_m = 1, or times perm(e^{λ_i t_j}) / n! for k_m = 0.
pub fn f_theta_translation_limit(k: &MultiplicityBC, lambda: &SpectralParam, t: &[f64]) -> Result<Complex64> {
    let l = lambda.as_slice();
    let n = k.n();
    let m = DMatrix::from_fn(n, n, |i, j| (l[i] * t[j]).exp());
    let damping = (-k.rho1() * t.iter().sum::<f64>()).exp();
    let value = if k.k_m() == 0 {
        permanent(&m) / factorial(n)
    } else {
        let e2t: Vec<Complex64> = t.iter().map(|x| Complex64::new((2.0 * x).exp(), 0.0)).collect();
        pair_product(rho(k).as_slice(), &[]) / pair_product(l, &[]) * determinant(&m) / pair_product(&e2t, &[])
    };
    check_finite(damping * value, "translation limit")
}

/// e^{(ρ−λ)(log a_u)} F_Θ(λ, k; a_{t+u}) with u added to every coordinate.
pub fn f_theta_translate(k: &MultiplicityBC, lambda: &SpectralParam, t: &[f64], u: f64) -> Result<Complex64> {
    let shifted = ChamberPoint::new(t.iter().map(|x| x + u).collect())?;
    let f = f_theta(k, lambda, &shifted, RootSubset::ThetaAn1)?.value;
    let r = rho(k);
    let phase: Complex64 = r
        .as_slice()
        .iter()
        .zip(lambda.as_slice())
        .map(|(rj, lj)| (rj - lj) * u)
        .sum();
    check_finite(phase.exp() * f, "scaled translate")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hcseries::{compute_coeffs, series_eval};
    use crate::jacobi::jacobi_phi;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm().max(1e-300)
    }

    fn k(n: usize, ks: f64, km: u8, kl: f64) -> MultiplicityBC {
        MultiplicityBC::new(n, ks, km, kl).unwrap()
    }

    fn lam(x: &[f64]) -> SpectralParam {
        SpectralParam::from_real(x).unwrap()
    }

    fn pt(x: &[f64]) -> ChamberPoint {
        ChamberPoint::new(x.to_vec()).unwrap()
    }

    #[test]
    fn rank_one_reductions() {
        for km in [0, 1] {
            let kk = k(1, 0.9, km, 0.35);
            let p = kk.jacobi();
            let l = lam(&[2.3]);
            let t = pt(&[0.8]);
            let phi = jacobi_phi(&p, c(2.3, 0.0), 0.8).unwrap();
            let f = evaluate(&EvalRequest {
                k: kk,
                lambda: l.clone(),
                t: t.clone(),
                target: Target::F,
            })
            .unwrap();
            assert!(rel(f.value, phi) < 1e-14);
            let big_phi = phi_product(&kk, &l, &t).unwrap();
            assert!(rel(big_phi, jacobi_phi_asymptotic(&p, c(2.3, 0.0), 0.8).unwrap()) < 1e-14);
            let th = f_theta(&kk, &l, &t, RootSubset::ThetaAn1).unwrap();
            assert!(rel(th.value, big_phi) < 1e-14);
            let bj = bessel_bcn(&kk, &l, &t).unwrap();
            let expected = bessel_j_normalized(kk.alpha(), c(0.0, 2.3 * 0.8)).unwrap();
            assert!(rel(bj.value, expected) < 1e-14);
        }
    }

    #[test]
    fn product_series_reference() {
        // k_s = k_l = 0, k_m = 1: α = β = −1/2.
        let kk = k(2, 0.0, 1, 0.0);
        let v = phi_product(&kk, &lam(&[3.3, 1.1]), &pt(&[2.0, 1.0])).unwrap();
        assert!(rel(v, c(46.894_260_343_984_22, 0.0)) < 1e-12);
    }

    #[test]
    fn cosh_permanent() {
        let kk = k(2, 0.0, 0, 0.0);
        let v = f_permanent(&kk, &lam(&[1.0, 2.0]), &pt(&[0.5, 0.25])).unwrap().value;
        let expected = 0.5 * (0.5f64.cosh() * 0.5f64.cosh() + 0.25f64.cosh() * 1f64.cosh());
        assert!(rel(v, c(expected, 0.0)) < 1e-14);
        let b = bessel_bcn(&kk, &lam(&[1.0, 2.0]), &pt(&[0.5, 0.25])).unwrap().value;
        assert!(rel(b, c(expected, 0.0)) < 1e-14);
    }

    #[test]
    fn determinant_matches_weyl_sum_of_series() {
        let kk = k(2, 1.0, 1, 0.5);
        let l = lam(&[3.0, 1.0]);
        let t = pt(&[1.0, 0.4]);
        let f = f_determinant(&kk, &l, &t).unwrap().value;
        let deep = pt(&[3.1, 1.6]);
        let f_deep = f_determinant(&kk, &lam(&[2.37, 0.81]), &deep).unwrap().value;
        let oracle = weyl_sum(&kk, &lam(&[2.37, 0.81]), |wl| {
            let table = compute_coeffs(&kk, wl, 14)?;
            Ok(series_eval(&table, &deep)?.value)
        })
        .unwrap();
        assert!(rel(f_deep, oracle) < 1e-8, "{f_deep} vs {oracle}");
        // Same closed-form value against the product-form Weyl sum (which
        // needs generic λ, so perturb off the integers).
        let l2 = lam(&[3.0 + 1.3e-3, 1.0 + 2.9e-3]);
        let f2 = f_determinant(&kk, &l2, &t).unwrap().value;
        let oracle2 = weyl_sum(&kk, &l2, |wl| phi_product(&kk, wl, &t)).unwrap();
        assert!(rel(f2, oracle2) < 1e-8, "{f2} vs {oracle2}");
        assert!(rel(f, f2) < 1e-2);
    }

    #[test]
    fn permanent_matches_weyl_sum() {
        let kk = k(3, 0.6, 0, 0.8);
        let l = SpectralParam::new(vec![c(2.1, 0.3), c(1.37, -0.2), c(0.55, 0.1)]).unwrap();
        let t = pt(&[1.9, 1.1, 0.45]);
        let f = f_permanent(&kk, &l, &t).unwrap().value;
        let oracle = weyl_sum(&kk, &l, |wl| phi_product(&kk, wl, &t)).unwrap();
        assert!(rel(f, oracle) < 1e-9, "{f} vs {oracle}");
    }

    #[test]
    fn series_branch_agrees_with_direct_determinant() {
        // Where both forms are accurate they must coincide.
        let kk = k(3, 0.7, 1, 0.45);
        let l = SpectralParam::new(vec![c(2.3, 0.2), c(1.1, -0.3), c(0.4, 0.5)]).unwrap();
        let t = pt(&[0.45, 0.3, 0.12]);
        let series = f_determinant(&kk, &l, &t).unwrap();
        let p = kk.jacobi();
        let m = matrix(l.as_slice(), t.as_slice(), |a, x| jacobi_phi(&p, a, x)).unwrap();
        let direct =
            constant_b(&kk).unwrap() * determinant(&m) / (pair_product(&l.squares(), &[]) * delta_m(t.as_slice()));
        assert!(rel(series.value, direct) < 1e-9, "{} vs {direct}", series.value);
    }

    #[test]
    fn normalized_at_origin() {
        for (n, km) in [(2, 1), (3, 1), (2, 0), (3, 0)] {
            let kk = k(n, 1.0, km, 0.5);
            let l = lam(&[2.7, 1.4, 0.6][..n]);
            let t = pt(&[1e-4, 6e-5, 2e-5][..n]);
            let f = evaluate(&EvalRequest {
                k: kk,
                lambda: l,
                t,
                target: Target::F,
            })
            .unwrap();
            assert!((f.value - 1.0).norm() < 1e-7, "n={n} km={km}: {}", f.value);
        }
    }

    #[test]
    fn degenerate_lambda_is_continuous() {
        let kk = k(2, 1.0, 1, 0.5);
        let t = pt(&[1.0, 0.4]);
        let at = |s: f64| f_determinant(&kk, &lam(&[2.0, 2.0 + s]), &t).unwrap();
        let d = at(1e-12);
        assert!(d.degenerate_path);
        let near = at(1e-6);
        assert!(!near.degenerate_path);
        assert!(rel(d.value, near.value) < 1e-5);
        let far = at(0.01);
        assert!(rel(d.value, far.value) < 1e-1);
        // Three coincident squares are refused.
        let kk3 = k(3, 1.0, 1, 0.5);
        let bad = f_determinant(&kk3, &lam(&[2.0, -2.0, 2.0 + 1e-13]), &pt(&[1.5, 1.0, 0.4]));
        assert!(matches!(bad, Err(Error::DegenerateLambda(_))));
    }

    #[test]
    fn theta_closed_form_matches_partial_weyl_sum() {
        for km in [0, 1] {
            let kk = k(3, 0.8, km, 0.3);
            let l = SpectralParam::new(vec![c(2.4, 0.3), c(1.3, -0.5), c(0.45, 0.2)]).unwrap();
            let t = pt(&[2.0, 1.2, 0.5]);
            let closed = f_theta(&kk, &l, &t, RootSubset::ThetaAn1).unwrap().value;
            let sum = theta_sum(&kk, &l, |wl| phi_product(&kk, wl, &t)).unwrap();
            assert!(rel(closed, sum) < 1e-11, "km={km}: {closed} vs {sum}");
        }
        let kk = k(2, 0.8, 1, 0.3);
        assert!(matches!(
            f_theta(&kk, &lam(&[1.5, -0.5]), &pt(&[1.0, 0.5]), RootSubset::ThetaAn1),
            Err(Error::HalfPlane(_))
        ));
        assert!(matches!(
            f_theta(&kk, &lam(&[1.5, 0.5]), &pt(&[1.0, 0.5]), RootSubset::Full),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn bessel_series_and_direct_forms_agree() {
        let kk = k(3, 0.9, 1, 0.2);
        let l = SpectralParam::new(vec![c(3.1, 0.2), c(1.7, 0.0), c(0.6, -0.4)]).unwrap();
        // max|λ|² t_1² is above the series threshold here …
        let t = pt(&[1.6, 1.0, 0.3]);
        let direct = bessel_bcn(&kk, &l, &t).unwrap().value;
        // … so compare against the series form directly.
        let y: Vec<f64> = t.as_slice().iter().map(|x| -x * x).collect();
        let (det_g, _) = confluent_det(kk.alpha(), |_| c(0.0, 0.0), &l.squares(), &y).unwrap();
        let series = constant_b(&kk).unwrap() * -det_g / 64.0;
        assert!(rel(direct, series) < 1e-9, "{direct} vs {series}");
    }

    #[test]
    fn wrong_multiplicity_or_shape_is_rejected() {
        let k1 = k(2, 1.0, 1, 0.5);
        let k0 = k(2, 1.0, 0, 0.5);
        let l = lam(&[2.0, 1.0]);
        let t = pt(&[1.0, 0.5]);
        assert!(matches!(f_determinant(&k0, &l, &t), Err(Error::Parameter(_))));
        assert!(matches!(f_permanent(&k1, &l, &t), Err(Error::Parameter(_))));
        assert!(matches!(f_determinant(&k1, &lam(&[2.0]), &t), Err(Error::Parameter(_))));
        let alpha_zero = k(2, 0.25, 1, 0.25);
        assert!(matches!(f_determinant(&alpha_zero, &l, &t), Err(Error::Parameter(_))));
    }
}

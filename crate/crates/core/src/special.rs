//! Scalar special functions behind the asymptotic risk characterization:
//! the Marchenko-Pastur Stieltjes transform, the effective noise level, the
//! scalarized `F` and `G` functions with their inner 1-D problems, and a
//! Moreau-envelope minimizer used as an independent numerical check.

use crate::error::{CoreError, Result};

/// sqrt(2/pi), the mean of |N(0,1)|.
pub const SQRT_2_OVER_PI: f64 = 0.797_884_560_802_865_4;

/// Intercept of the shifted ReLU, 1/sqrt(2*pi).
pub const RELU_SHIFT: f64 = 0.398_942_280_401_432_7;

#[inline]
pub fn erf(x: f64) -> f64 {
    libm::erf(x)
}

#[inline]
pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}

/// Evaluation point of the Marchenko-Pastur Stieltjes transform.
#[derive(Debug, Clone, Copy)]
pub struct StieltjesQuery {
    /// Spectral argument, strictly negative.
    pub z: f64,
    /// Aspect ratio N/d of the weight matrix.
    pub psi1: f64,
}

/// Hermite-style decomposition of the shifted ReLU into constant, linear and
/// orthogonal components.
#[derive(Debug, Clone, Copy)]
pub struct ActivationDecomposition {
    pub mu0: f64,
    pub mu1: f64,
    pub mu2: f64,
}

impl ActivationDecomposition {
    pub fn shifted_relu() -> Self {
        Self {
            mu0: 0.0,
            mu1: 0.5,
            mu2: (0.25 - 0.5 / std::f64::consts::PI).sqrt(),
        }
    }
}

impl Default for ActivationDecomposition {
    fn default() -> Self {
        Self::shifted_relu()
    }
}

/// Arguments of the scalar root equation behind the `G` function.
#[derive(Debug, Clone, Copy)]
pub struct NuStarQuery {
    /// The ratio gamma*(rho+1)/(eps*omega).
    pub a: f64,
    /// The ratio tau_g/beta.
    pub rho: f64,
}

/// Stieltjes transform of the Marchenko-Pastur law of W W^T for W with unit
/// rows and aspect ratio `psi1`, evaluated at a negative real point.
pub fn stieltjes_mp(q: StieltjesQuery) -> Result<f64> {
    if !(q.z < 0.0) || !q.z.is_finite() {
        return Err(CoreError::Domain(format!(
            "stieltjes_mp requires z < 0, got {}",
            q.z
        )));
    }
    if !(q.psi1 > 0.0) || !q.psi1.is_finite() {
        return Err(CoreError::Domain(format!(
            "stieltjes_mp requires psi1 > 0, got {}",
            q.psi1
        )));
    }
    let t = 1.0 - q.psi1 - q.z;
    let mut disc = t * t - 4.0 * q.psi1 * q.z;
    if disc < 0.0 {
        if disc > -1e-14 {
            disc = 0.0;
        } else {
            return Err(CoreError::Numerical(format!(
                "stieltjes_mp discriminant negative: {disc}"
            )));
        }
    }
    let root = disc.sqrt();
    if t > 0.0 {
        // t - root cancels; multiply by the conjugate: t^2 - disc = 4 psi1 z.
        Ok(-2.0 / (t + root))
    } else {
        Ok((t - root) / (-2.0 * q.psi1 * q.z))
    }
}

/// Effective noise level sigma^2 of the equivalent linear model.
pub fn sigma_sq_effective(tau2: f64, psi1: f64) -> Result<f64> {
    if !(tau2 >= 0.0) {
        return Err(CoreError::Domain(format!(
            "sigma_sq_effective requires tau2 >= 0, got {tau2}"
        )));
    }
    let s = stieltjes_mp(StieltjesQuery {
        z: 2.0 / std::f64::consts::PI - 1.0,
        psi1,
    })?;
    let out = tau2 + 1.0 - psi1 * (1.0 + (1.0 - 2.0 / std::f64::consts::PI) * s);
    if out < tau2 - 1e-9 || out > tau2 + 1.0 + 1e-9 {
        return Err(CoreError::Numerical(format!(
            "sigma_sq_effective out of range: {out} for tau2={tau2}, psi1={psi1}"
        )));
    }
    Ok(out.clamp(tau2, tau2 + 1.0))
}

const LAMBDA_MAX: f64 = 1.0 - 1e-9;

fn big_f_integrand(lambda: f64, aa: f64, bb: f64, psi1: f64, gg: f64) -> f64 {
    if lambda <= 0.0 {
        return 0.0;
    }
    let lambda = lambda.min(LAMBDA_MAX);
    let pi = std::f64::consts::PI;
    // Argument 2*lambda/pi - 1 stays in [-1, 2/pi - 1], always negative.
    let s = stieltjes_mp(StieltjesQuery {
        z: 2.0 * lambda / pi - 1.0,
        psi1,
    })
    .expect("argument is always negative for lambda < 1");
    let bracket = aa + bb + (aa * (1.0 - 2.0 * lambda / pi) + 2.0 / pi * (1.0 - lambda) * bb) * s;
    let mut v = 0.5 * lambda * psi1 * bracket;
    if gg > 0.0 {
        v -= 0.5 * lambda / (1.0 - lambda) * gg;
    }
    v
}

/// The inner supremum of the scalarized objective, together with its
/// maximizing lambda. See [`big_f`].
pub fn big_f_with_argmax(a: f64, b: f64, psi1: f64, gamma: f64) -> Result<(f64, f64)> {
    if !(psi1 > 0.0) {
        return Err(CoreError::Domain(format!(
            "big_f requires psi1 > 0, got {psi1}"
        )));
    }
    let (aa, bb, gg) = (a * a, b * b, gamma * gamma);
    // Coarse scan keeps the golden refinement out of flat regions near 0.
    const SCAN: usize = 64;
    let mut best = 0.0_f64;
    let mut best_i = 0usize;
    for i in 0..=SCAN {
        let lambda = i as f64 / SCAN as f64 * LAMBDA_MAX;
        let v = big_f_integrand(lambda, aa, bb, psi1, gg);
        if v > best {
            best = v;
            best_i = i;
        }
    }
    let mut lo = best_i.saturating_sub(1) as f64 / SCAN as f64 * LAMBDA_MAX;
    let mut hi = ((best_i + 1).min(SCAN)) as f64 / SCAN as f64 * LAMBDA_MAX;
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = hi - INV_PHI * (hi - lo);
    let mut d = lo + INV_PHI * (hi - lo);
    let mut fc = big_f_integrand(c, aa, bb, psi1, gg);
    let mut fd = big_f_integrand(d, aa, bb, psi1, gg);
    while hi - lo > 1e-10 {
        if fc > fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - INV_PHI * (hi - lo);
            fc = big_f_integrand(c, aa, bb, psi1, gg);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + INV_PHI * (hi - lo);
            fd = big_f_integrand(d, aa, bb, psi1, gg);
        }
    }
    let lambda = 0.5 * (lo + hi);
    let v = big_f_integrand(lambda, aa, bb, psi1, gg);
    if v >= best {
        Ok((v.max(0.0), lambda))
    } else {
        Ok((best, best_i as f64 / SCAN as f64 * LAMBDA_MAX))
    }
}

/// sup over lambda in [0, 1) of the scalarized quadratic-form limit minus the
/// gamma penalty. Nonnegative by the lambda = 0 endpoint.
pub fn big_f(a: f64, b: f64, psi1: f64, gamma: f64) -> Result<f64> {
    big_f_with_argmax(a, b, psi1, gamma).map(|(v, _)| v)
}

fn nu_residual(nu: f64, a: f64, inv_rho: f64) -> f64 {
    a - nu * inv_rho - nu * erf(nu / std::f64::consts::SQRT_2)
        - SQRT_2_OVER_PI * (-0.5 * nu * nu).exp()
}

/// Unique root of the threshold equation `a - nu/rho - nu erf(nu/sqrt 2)
/// - sqrt(2/pi) exp(-nu^2/2) = 0`, defined for `a > sqrt(2/pi)`.
pub fn nu_star(q: NuStarQuery) -> Result<f64> {
    if !(q.rho > 0.0) {
        return Err(CoreError::Domain(format!(
            "nu_star requires rho > 0, got {}",
            q.rho
        )));
    }
    if !(q.a > SQRT_2_OVER_PI) {
        if (q.a - SQRT_2_OVER_PI).abs() < 1e-15 {
            return Ok(0.0);
        }
        return Err(CoreError::NoSolution(format!(
            "nu_star requires a > sqrt(2/pi); got a={}",
            q.a
        )));
    }
    let inv_rho = 1.0 / q.rho;
    // Residual is a - sqrt(2/pi) > 0 at nu = 0 and negative at nu = a*rho.
    let mut lo = 0.0_f64;
    let mut hi = q.a * q.rho;
    debug_assert!(nu_residual(hi, q.a, inv_rho) <= 0.0);
    while hi - lo > 1e-8 * (1.0 + q.a * q.rho).min(1.0e8) {
        let mid = 0.5 * (lo + hi);
        if nu_residual(mid, q.a, inv_rho) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // Two Newton polish steps; the residual derivative is -(1/rho + erf(nu/sqrt 2)).
    let mut nu = 0.5 * (lo + hi);
    for _ in 0..2 {
        let h = nu_residual(nu, q.a, inv_rho);
        let hp = -(inv_rho + erf(nu / std::f64::consts::SQRT_2));
        nu = (nu - h / hp).clamp(lo - 1e-6, hi + 1e-6).max(0.0);
    }
    let res = nu_residual(nu, q.a, inv_rho);
    if res.abs() > 1e-10 * q.a.max(1.0) {
        return Err(CoreError::Numerical(format!(
            "nu_star residual {res:.3e} at nu={nu} (a={}, rho={})",
            q.a, q.rho
        )));
    }
    Ok(nu)
}

/// Limit of the adversarial Moreau-envelope correction. Zero on the first
/// branch, nonpositive on the second.
pub fn big_g(omega: f64, rho: f64, gamma: f64, eps: f64) -> Result<f64> {
    if !(rho > 0.0) || !(gamma >= 0.0) || !(eps > 0.0) {
        return Err(CoreError::Domain(format!(
            "big_g domain violated: omega={omega}, rho={rho}, gamma={gamma}, eps={eps}"
        )));
    }
    if omega <= 0.0 {
        return Ok(0.0);
    }
    let a = gamma * (rho + 1.0) / (eps * omega);
    // Hysteresis keeps the branch test from chattering right at the kink,
    // where the value is 0 from both sides anyway.
    if a <= SQRT_2_OVER_PI * (1.0 + 1e-12) {
        return Ok(0.0);
    }
    let nu = nu_star(NuStarQuery { a, rho })?;
    Ok(omega * omega / (2.0 * rho * (rho + 1.0)) * (erf(nu / std::f64::consts::SQRT_2) - a * nu))
}

/// Mean of the folded normal |N(0, m^2)|.
pub fn folded_normal_mean(m: f64) -> Result<f64> {
    if !(m >= 0.0) {
        return Err(CoreError::Domain(format!(
            "folded_normal_mean requires m >= 0, got {m}"
        )));
    }
    Ok(m * SQRT_2_OVER_PI)
}

/// Direct evaluation of f(v; gamma) + ||x - v||^2 / (2 rho), the quantity the
/// Moreau envelope minimizes.
fn envelope_objective(x: &[f64], v: &[f64], rho: f64, gamma: f64, eps: f64) -> f64 {
    let n = x.len() as f64;
    let mut quad = 0.0;
    let mut sq = 0.0;
    let mut l1 = 0.0;
    for (&xi, &vi) in x.iter().zip(v) {
        quad += (xi - vi) * (xi - vi);
        sq += vi * vi;
        l1 += vi.abs();
    }
    let plus = (n * gamma / eps - l1).max(0.0);
    quad / (2.0 * rho) + 0.5 * sq - plus * plus / (2.0 * n)
}

/// Numerical minimizer of the Moreau envelope of f(.; gamma) at `x` with
/// parameter `rho`, by direct minimization over v.
///
/// The concave term -(n gamma/eps - ||v||_1)_+^2 / (2n) is the lower envelope
/// of its tangent lines w ||v||_1 + n w^2/2 - (n gamma/eps) w over slopes
/// w in [0, gamma/eps]; for each fixed slope the problem separates across
/// coordinates, and the profile over w is strictly convex, so a golden-section
/// search over w is exact. Returned value is the objective evaluated at the
/// reconstructed minimizer.
pub fn moreau_envelope_oracle(x: &[f64], rho: f64, gamma: f64, eps: f64) -> Result<f64> {
    if !(rho > 0.0) || !(gamma >= 0.0) || !(eps > 0.0) {
        return Err(CoreError::Domain(format!(
            "moreau_envelope_oracle domain violated: rho={rho}, gamma={gamma}, eps={eps}"
        )));
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(CoreError::Domain("moreau envelope input not finite".into()));
    }
    let n = x.len() as f64;
    let shrink = rho / (1.0 + rho);
    let coord_min = |w: f64, out: Option<&mut Vec<f64>>| -> f64 {
        // min over v of ||x - v||^2/(2 rho) + ||v||^2/2 + w ||v||_1,
        // plus the tangent intercept n w^2/2 - (n gamma / eps) w.
        let mut total = n * w * w / 2.0 - n * gamma / eps * w;
        let mut store = out;
        for &xi in x {
            let vi = if xi > rho * w {
                (xi - rho * w) / (1.0 + rho)
            } else if xi < -rho * w {
                (xi + rho * w) / (1.0 + rho)
            } else {
                0.0
            };
            total += (xi - vi) * (xi - vi) / (2.0 * rho) + 0.5 * vi * vi + w * vi.abs();
            if let Some(v) = store.as_deref_mut() {
                v.push(vi);
            }
        }
        let _ = shrink;
        total
    };
    let mut lo = 0.0_f64;
    let mut hi = gamma / eps;
    let w_star = if hi <= 0.0 {
        0.0
    } else {
        const INV_PHI: f64 = 0.618_033_988_749_894_9;
        let mut c = hi - INV_PHI * (hi - lo);
        let mut d = lo + INV_PHI * (hi - lo);
        let mut fc = coord_min(c, None);
        let mut fd = coord_min(d, None);
        while hi - lo > 1e-12 * (1.0 + gamma / eps) {
            if fc < fd {
                hi = d;
                d = c;
                fd = fc;
                c = hi - INV_PHI * (hi - lo);
                fc = coord_min(c, None);
            } else {
                lo = c;
                c = d;
                fc = fd;
                d = lo + INV_PHI * (hi - lo);
                fd = coord_min(d, None);
            }
        }
        0.5 * (lo + hi)
    };
    let mut v = Vec::with_capacity(x.len());
    coord_min(w_star, Some(&mut v));
    Ok(envelope_objective(x, &v, rho, gamma, eps))
}

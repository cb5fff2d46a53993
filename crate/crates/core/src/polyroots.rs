//! Closed-radical solvers for depressed cubics and general quartics.
//!
//! The quartic pipeline is: shift away the cubic term, form the resolvent
//! cubic `z^3 - 2*alpha*z^2 + (alpha^2 - 4*gamma)*z + beta^2`, solve it by
//! Cardano's formulas with an explicit cube-root pairing, and assemble the
//! four quartic roots as `X = (±s1 ± s2 ± s3)/2` from the square roots
//! `s_i = sqrt(-z_i)`, with branches fixed so that `s1*s2*s3 = -beta`.
//!
//! [`polish_root`] is an independent Newton refiner used as a cross-check of
//! the radical path; it never feeds back into it.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::real::Real;

/// Relative residual thresholds are scale-relative; this is the absolute
/// floor applied on top of them.
pub const ABS_FLOOR: f64 = 1e-14;

/// Coefficients of a depressed quartic `X^4 + alpha X^2 + beta X + gamma`,
/// together with the shift `X = F + shift` that produced it from a monic
/// quartic in `F`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DepressedQuartic<T> {
    pub alpha: T,
    pub beta: T,
    pub gamma: T,
    /// `shift = B / (4A)` for the original `A F^4 + B F^3 + C F^2 + D F + E`.
    pub shift: T,
}

impl<T: Real> DepressedQuartic<T> {
    /// Depresses `a x^4 + b x^3 + c x^2 + d x + e` via `x = X - b/(4a)`.
    pub fn from_coeffs(a: T, b: T, c: T, d: T, e: T) -> Result<Self> {
        if a == T::zero() {
            return Err(Error::DegenerateDegree);
        }
        if ![a, b, c, d, e].iter().all(|x| x.is_finite()) {
            return Err(Error::domain("non-finite quartic coefficient"));
        }
        let (bm, cm, dm, em) = (b / a, c / a, d / a, e / a);
        let t8 = T::of(8.0);
        let alpha = cm - T::of(3.0) * bm * bm / t8;
        let beta = bm * bm * bm / t8 - bm * cm * T::half() + dm;
        let gamma = -T::of(3.0) * bm * bm * bm * bm / T::of(256.0)
            + bm * bm * cm / T::of(16.0)
            - bm * dm / T::of(4.0)
            + em;
        Ok(DepressedQuartic {
            alpha,
            beta,
            gamma,
            shift: bm / T::of(4.0),
        })
    }

    /// Re-expands the depressed form back to monic coefficients
    /// `(b, c, d, e)` of `F^4 + b F^3 + c F^2 + d F + e`. Used by tests to
    /// verify the round trip against the inputs.
    pub fn reconstruct_monic(&self) -> (T, T, T, T) {
        let t = self.shift;
        let b = T::of(4.0) * t;
        let c = T::of(6.0) * t * t + self.alpha;
        let d = T::of(4.0) * t * t * t + T::two() * self.alpha * t + self.beta;
        let e = t * t * t * t + self.alpha * t * t + self.beta * t + self.gamma;
        (b, c, d, e)
    }
}

/// Cardano data for the resolvent cubic of a depressed quartic.
///
/// `z1 = P + Q + 2 alpha/3` is real (up to rounding); `z2`, `z3` are
/// `-(P+Q)/2 + 2 alpha/3 ± i sqrt(3)/2 (P-Q)`. `cal_a` and `cal_b` are the
/// quantities under the cube and square roots: `P, Q = cbrt(cal_a ± sqrt(cal_b))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResolventSolution<T> {
    pub z1: Complex<T>,
    pub z2: Complex<T>,
    pub z3: Complex<T>,
    /// First Cardano radical, `P = cbrt(cal_a + sqrt(cal_b))`.
    pub p: Complex<T>,
    /// Second Cardano radical, paired so that `P*Q = -p/3` for the shifted cubic.
    pub q: Complex<T>,
    pub cal_a: T,
    pub cal_b: T,
}

impl<T: Real> ResolventSolution<T> {
    /// Relative residuals of the three Vieta identities
    /// `z1+z2+z3 = 2 alpha`, `sum z_i z_j = alpha^2 - 4 gamma`,
    /// `z1 z2 z3 = -beta^2`.
    pub fn vieta_residuals(&self, alpha: T, beta: T, gamma: T) -> [T; 3] {
        let (z1, z2, z3) = (self.z1, self.z2, self.z3);
        let sum = z1 + z2 + z3;
        let pair = z1 * z2 + z1 * z3 + z2 * z3;
        let prod = z1 * z2 * z3;
        let e1 = T::two() * alpha;
        let e2 = alpha * alpha - T::of(4.0) * gamma;
        let e3 = -(beta * beta);
        let rel = |got: Complex<T>, want: T| {
            (got - Complex::new(want, T::zero())).norm() / want.abs().max(T::one())
        };
        [rel(sum, e1), rel(pair, e2), rel(prod, e3)]
    }

    /// True when all three resolvent roots are real (the square-root
    /// discriminant `cal_b` is non-positive).
    pub fn all_real(&self) -> bool {
        self.cal_b <= T::zero()
    }
}

/// Cardano radicals for `w^3 + p w + q = 0`.
///
/// Returns `(P, Q, cal_a, cal_b)` with `cal_a = -q/2`,
/// `cal_b = q^2/4 + p^3/27`, and the cube-root branches paired so that
/// `P*Q = -p/3`. For `cal_b < 0` (three real roots) `P` is the principal
/// complex cube root and `Q = (-p/3)/P`; for `cal_b >= 0` the real cube root
/// of whichever radicand avoids cancellation is taken first and the other
/// radical is recovered by the same division. A discriminant with
/// `|cal_b| <= 1e-12 * cal_a^2` is collapsed to zero to sidestep
/// catastrophic cancellation at double roots.
fn cardano_radicals<T: Real>(p: T, q: T) -> (Complex<T>, Complex<T>, T, T) {
    let cal_a = -q * T::half();
    let mut cal_b = q * q / T::of(4.0) + p * p * p / T::of(27.0);
    if cal_b.abs() <= T::of(1e-12) * cal_a * cal_a {
        cal_b = T::zero();
    }
    let minus_p3 = -p / T::of(3.0);
    if cal_b < T::zero() {
        // Three real roots: complex radicals, Q is forced onto the conjugate
        // branch by the product pairing.
        let sq = Complex::new(T::zero(), (-cal_b).sqrt());
        let pc = (Complex::new(cal_a, T::zero()) + sq).cbrt();
        // |P|^3 = (-p/3)^(3/2) > 0 here, so the division is well defined.
        let qc = Complex::new(minus_p3, T::zero()) / pc;
        (pc, qc, cal_a, cal_b)
    } else {
        let sq = cal_b.sqrt();
        if cal_a >= T::zero() {
            let pr = (cal_a + sq).cbrt();
            let qr = if pr == T::zero() {
                (cal_a - sq).cbrt()
            } else {
                minus_p3 / pr
            };
            (
                Complex::new(pr, T::zero()),
                Complex::new(qr, T::zero()),
                cal_a,
                cal_b,
            )
        } else {
            // cal_a + sq would cancel; build Q from the large radicand first.
            let qr = (cal_a - sq).cbrt();
            let pr = minus_p3 / qr;
            (
                Complex::new(pr, T::zero()),
                Complex::new(qr, T::zero()),
                cal_a,
                cal_b,
            )
        }
    }
}

/// Roots of the depressed cubic `w^3 + p w + q = 0`.
///
/// The first root is `P + Q` (real up to rounding); the other two are
/// `-(P+Q)/2 ± i sqrt(3)/2 (P - Q)`.
pub fn solve_depressed_cubic<T: Real>(p: T, q: T) -> Result<[Complex<T>; 3]> {
    if !p.is_finite() || !q.is_finite() {
        return Err(Error::domain("non-finite cubic coefficient"));
    }
    let (pc, qc, _, _) = cardano_radicals(p, q);
    Ok(cubic_roots_from_radicals(pc, qc))
}

fn cubic_roots_from_radicals<T: Real>(pc: Complex<T>, qc: Complex<T>) -> [Complex<T>; 3] {
    let sum = pc + qc;
    let diff = pc - qc;
    let half = Complex::new(T::half(), T::zero());
    let im_rot = Complex::new(T::zero(), T::of(3.0).sqrt() * T::half());
    let w1 = sum;
    let w2 = -half * sum + im_rot * diff;
    let w3 = -half * sum - im_rot * diff;
    [w1, w2, w3]
}

/// Roots of the general cubic `a w^3 + b w^2 + c w + d = 0`, `a != 0`,
/// via the shift `w = u - b/(3a)` and the depressed solver.
pub fn solve_cubic<T: Real>(a: T, b: T, c: T, d: T) -> Result<[Complex<T>; 3]> {
    if a == T::zero() {
        return Err(Error::DegenerateDegree);
    }
    let (bm, cm, dm) = (b / a, c / a, d / a);
    let three = T::of(3.0);
    let shift = bm / three;
    let p = cm - bm * bm / three;
    let q = dm - bm * cm / three + T::two() * bm * bm * bm / T::of(27.0);
    let roots = solve_depressed_cubic(p, q)?;
    let s = Complex::new(shift, T::zero());
    Ok([roots[0] - s, roots[1] - s, roots[2] - s])
}

/// Roots of `a x^2 + b x + c = 0`, `a != 0`, with the cancellation-free
/// quadratic formula in the real case.
pub fn solve_quadratic<T: Real>(a: T, b: T, c: T) -> Result<[Complex<T>; 2]> {
    if a == T::zero() {
        return Err(Error::DegenerateDegree);
    }
    let disc = b * b - T::of(4.0) * a * c;
    if disc >= T::zero() {
        let sq = disc.sqrt();
        let q = -(b + b.signum() * sq) * T::half();
        let (r1, r2) = if q == T::zero() {
            (T::zero(), T::zero())
        } else {
            (q / a, c / q)
        };
        Ok([Complex::new(r1, T::zero()), Complex::new(r2, T::zero())])
    } else {
        let re = -b / (T::two() * a);
        let im = (-disc).sqrt() / (T::two() * a);
        Ok([Complex::new(re, im), Complex::new(re, -im)])
    }
}

/// Solves the resolvent cubic `z^3 - 2 alpha z^2 + (alpha^2 - 4 gamma) z + beta^2 = 0`
/// attached to the depressed quartic `X^4 + alpha X^2 + beta X + gamma`.
pub fn solve_resolvent<T: Real>(alpha: T, beta: T, gamma: T) -> Result<ResolventSolution<T>> {
    if ![alpha, beta, gamma].iter().all(|x| x.is_finite()) {
        return Err(Error::domain("non-finite resolvent input"));
    }
    // Shift z = w + 2 alpha / 3 to reach w^3 + p w + q.
    let p = -alpha * alpha / T::of(3.0) - T::of(4.0) * gamma;
    let q = beta * beta + T::two() * alpha * alpha * alpha / T::of(27.0)
        - T::of(8.0) * alpha * gamma / T::of(3.0);
    let (pc, qc, cal_a, cal_b) = cardano_radicals(p, q);
    let [w1, w2, w3] = cubic_roots_from_radicals(pc, qc);
    let back = Complex::new(T::two() * alpha / T::of(3.0), T::zero());
    Ok(ResolventSolution {
        z1: w1 + back,
        z2: w2 + back,
        z3: w3 + back,
        p: pc,
        q: qc,
        cal_a,
        cal_b,
    })
}

/// Assembles the four roots of the depressed quartic from its resolvent as
/// `X = (±s1 ± s2 ± s3)/2`, `s_i = sqrt(-z_i)`, and undoes the shift.
///
/// Principal square-root branches are used, except that the sign of `s1` is
/// flipped when needed to satisfy the product constraint `s1 s2 s3 = -beta`;
/// without that constraint the assembled values are not roots.
pub fn assemble_quartic_roots<T: Real>(
    dq: &DepressedQuartic<T>,
    rs: &ResolventSolution<T>,
) -> [Complex<T>; 4] {
    let mut s1 = (-rs.z1).sqrt();
    let s2 = (-rs.z2).sqrt();
    let s3 = (-rs.z3).sqrt();
    let prod = s1 * s2 * s3;
    let target = Complex::new(-dq.beta, T::zero());
    if (prod - target).norm() > (-prod - target).norm() {
        s1 = -s1;
    }
    let half = Complex::new(T::half(), T::zero());
    let shift = Complex::new(dq.shift, T::zero());
    [
        half * (s1 + s2 + s3) - shift,
        half * (s1 - s2 - s3) - shift,
        half * (-s1 + s2 - s3) - shift,
        half * (-s1 - s2 + s3) - shift,
    ]
}

/// All four complex roots of `a x^4 + b x^3 + c x^2 + d x + e = 0`, `a != 0`.
///
/// An exactly vanishing tail is deflated first (zero is then a root up to
/// the observed multiplicity and the cofactor has lower degree). Otherwise
/// the roots come from the radical assembly; each then receives complex
/// Newton corrections until the residual stops improving, which repairs the
/// cancellation the assembly suffers when roots of very different magnitude
/// are combined from large radicals.
pub fn solve_quartic<T: Real>(a: T, b: T, c: T, d: T, e: T) -> Result<[Complex<T>; 4]> {
    let zero = Complex::new(T::zero(), T::zero());
    if e == T::zero() {
        if a == T::zero() {
            return Err(Error::DegenerateDegree);
        }
        if d == T::zero() {
            if c == T::zero() {
                return Ok([zero, zero, zero, Complex::new(-b / a, T::zero())]);
            }
            let [r1, r2] = solve_quadratic(a, b, c)?;
            return Ok([zero, zero, r1, r2]);
        }
        let [r1, r2, r3] = solve_cubic(a, b, c, d)?;
        return Ok([zero, r1, r2, r3]);
    }
    let dq = DepressedQuartic::from_coeffs(a, b, c, d, e)?;
    let rs = solve_resolvent(dq.alpha, dq.beta, dq.gamma)?;
    let mut roots = assemble_quartic_roots(&dq, &rs);
    for z in &mut roots {
        *z = refine_complex_root(a, b, c, d, e, *z);
    }
    Ok(roots)
}

fn quartic_eval_complex<T: Real>(
    a: T,
    b: T,
    c: T,
    d: T,
    e: T,
    z: Complex<T>,
) -> (Complex<T>, Complex<T>) {
    let ca = Complex::new(a, T::zero());
    let cb = Complex::new(b, T::zero());
    let cc = Complex::new(c, T::zero());
    let cd = Complex::new(d, T::zero());
    let ce = Complex::new(e, T::zero());
    let value = (((ca * z + cb) * z + cc) * z + cd) * z + ce;
    let four = Complex::new(T::of(4.0), T::zero());
    let three = Complex::new(T::of(3.0), T::zero());
    let two = Complex::new(T::two(), T::zero());
    let deriv = ((four * ca * z + three * cb) * z + two * cc) * z + cd;
    (value, deriv)
}

fn refine_complex_root<T: Real>(a: T, b: T, c: T, d: T, e: T, z0: Complex<T>) -> Complex<T> {
    let mut z = z0;
    let (v0, _) = quartic_eval_complex(a, b, c, d, e, z);
    let mut best = v0.norm();
    for _ in 0..12 {
        let (value, deriv) = quartic_eval_complex(a, b, c, d, e, z);
        if deriv.norm() == T::zero() || !deriv.norm().is_finite() {
            break;
        }
        let next = z - value / deriv;
        let (vn, _) = quartic_eval_complex(a, b, c, d, e, next);
        if !vn.norm().is_finite() || vn.norm() >= best {
            break;
        }
        best = vn.norm();
        z = next;
    }
    z
}

/// Real branch of `sqrt(z) + sqrt(conj(z))` for `z = a + b i`, evaluated
/// without complex arithmetic: `sqrt(2) * sqrt(a + sqrt(a^2 + b^2))`.
/// Always non-negative.
pub fn combine_conjugate_sqrts<T: Real>(a: T, b: T) -> T {
    T::two().sqrt() * (a + a.hypot(b)).sqrt()
}

/// Value, derivative and monomial scale of the quartic at `x`.
///
/// The scale is the largest monomial magnitude, the natural yardstick for
/// backward error.
pub fn quartic_eval<T: Real>(a: T, b: T, c: T, d: T, e: T, x: T) -> (T, T, T) {
    let x2 = x * x;
    let m4 = a * x2 * x2;
    let m3 = b * x2 * x;
    let m2 = c * x2;
    let m1 = d * x;
    let value = ((a * x + b) * x + c) * x * x + m1 + e;
    let deriv = ((T::of(4.0) * a * x + T::of(3.0) * b) * x + T::two() * c) * x + d;
    let scale = m4
        .abs()
        .max(m3.abs())
        .max(m2.abs())
        .max(m1.abs())
        .max(e.abs());
    (value, deriv, scale)
}

/// Backward error of `x` as a root, relative to the monomial scale
/// (with the absolute floor folded in).
pub fn quartic_backward_error<T: Real>(a: T, b: T, c: T, d: T, e: T, x: T) -> T {
    let (value, _, scale) = quartic_eval(a, b, c, d, e, x);
    value.abs() / scale.max(T::of(ABS_FLOOR))
}

/// Newton refinement of a simple real root of the quartic, starting from `x0`.
///
/// Converges when the residual drops below `1e-13` of the monomial scale
/// (absolute floor `1e-14`); gives up after 50 iterations with a diagnostic.
pub fn polish_root<T: Real>(a: T, b: T, c: T, d: T, e: T, x0: T) -> Result<T> {
    // pinned for f64; for wider-epsilon scalars the floor scales with the
    // machine precision instead
    let tol_rel = T::of(1e-13).max(T::epsilon() * T::of(400.0));
    let floor = T::of(ABS_FLOOR).max(T::epsilon() * T::of(50.0));
    let mut x = x0;
    let mut last_residual = T::infinity();
    for iteration in 0..=50 {
        let (value, deriv, scale) = quartic_eval(a, b, c, d, e, x);
        last_residual = value.abs();
        if last_residual <= tol_rel * scale + floor {
            return Ok(x);
        }
        if iteration == 50 {
            break;
        }
        if deriv == T::zero() || !deriv.is_finite() {
            break;
        }
        let next = x - value / deriv;
        if !next.is_finite() {
            break;
        }
        x = next;
    }
    Err(Error::NonConvergence {
        iterations: 50,
        last: x.as_f64(),
        residual: last_residual.as_f64(),
    })
}

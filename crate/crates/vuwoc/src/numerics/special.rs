//! Scalar special functions used throughout the crate.
//!
//! `erf`/`erfc` are a port of the FreeBSD msun routines (the same code that
//! backs Go's `math.Erf`), accurate to < 1 ulp. The gamma-family functions
//! follow the classical Lanczos / series / continued-fraction recipes and the
//! modified Bessel function of the second kind uses the Temme series with a
//! Steed continued fraction for larger arguments.

#![allow(clippy::excessive_precision)]

use std::f64::consts::PI;

const ERX: f64 = 8.45062911510467529297e-01;

// erf coefficients, [0, 0.84375]
const EFX: f64 = 1.28379167095512586316e-01;
const EFX8: f64 = 1.02703333676410069053e+00;
const PP0: f64 = 1.28379167095512558561e-01;
const PP1: f64 = -3.25042107247001499370e-01;
const PP2: f64 = -2.84817495755985104766e-02;
const PP3: f64 = -5.77027029648944159157e-03;
const PP4: f64 = -2.37630166566501626084e-05;
const QQ1: f64 = 3.97917223959155352819e-01;
const QQ2: f64 = 6.50222499887672944485e-02;
const QQ3: f64 = 5.08130628187576562776e-03;
const QQ4: f64 = 1.32494738004321644526e-04;
const QQ5: f64 = -3.96022827877536812320e-06;

// erf coefficients, [0.84375, 1.25]
const PA0: f64 = -2.36211856075265944077e-03;
const PA1: f64 = 4.14856118683748331666e-01;
const PA2: f64 = -3.72207876035701323847e-01;
const PA3: f64 = 3.18346619901161753674e-01;
const PA4: f64 = -1.10894694282396677476e-01;
const PA5: f64 = 3.54783043256182359371e-02;
const PA6: f64 = -2.16637559486879084300e-03;
const QA1: f64 = 1.06420880400844228286e-01;
const QA2: f64 = 5.40397917702171048937e-01;
const QA3: f64 = 7.18286544141962662868e-02;
const QA4: f64 = 1.26171219808761642112e-01;
const QA5: f64 = 1.36370839120290507362e-02;
const QA6: f64 = 1.19844998467991074170e-02;

// erfc coefficients, [1.25, 1/0.35]
const RA0: f64 = -9.86494403484714822705e-03;
const RA1: f64 = -6.93858572707181764372e-01;
const RA2: f64 = -1.05586262253232909814e+01;
const RA3: f64 = -6.23753324503260060396e+01;
const RA4: f64 = -1.62396669462573470355e+02;
const RA5: f64 = -1.84605092906711035994e+02;
const RA6: f64 = -8.12874355063065934246e+01;
const RA7: f64 = -9.81432934416914548592e+00;
const SA1: f64 = 1.96512716674392571292e+01;
const SA2: f64 = 1.37657754143519042600e+02;
const SA3: f64 = 4.34565877475229228821e+02;
const SA4: f64 = 6.45387271733267880336e+02;
const SA5: f64 = 4.29008140027567833386e+02;
const SA6: f64 = 1.08635005541779435134e+02;
const SA7: f64 = 6.57024977031928170135e+00;
const SA8: f64 = -6.04244152148580987438e-02;

// erfc coefficients, [1/0.35, 28]
const RB0: f64 = -9.86494292470009928597e-03;
const RB1: f64 = -7.99283237680523006574e-01;
const RB2: f64 = -1.77579549177547519889e+01;
const RB3: f64 = -1.60636384855821916062e+02;
const RB4: f64 = -6.37566443368389627722e+02;
const RB5: f64 = -1.02509513161107724954e+03;
const RB6: f64 = -4.83519191608651397019e+02;
const SB1: f64 = 3.03380607434824582924e+01;
const SB2: f64 = 3.25792512996573918826e+02;
const SB3: f64 = 1.53672958608443695994e+03;
const SB4: f64 = 3.19985821950859553908e+03;
const SB5: f64 = 2.55305040643316442583e+03;
const SB6: f64 = 4.74528541206955367215e+02;
const SB7: f64 = -2.24409524465858183362e+01;

const VERY_TINY: f64 = 2.848094538889218e-306;
const TINY: f64 = 1.3877787807814457e-17; // 2^-56
const SMALL: f64 = 3.725290298461914e-9; // 2^-28

/// Error function erf(x) = (2/√π) ∫₀ˣ exp(-t²) dt.
pub fn erf(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x == f64::INFINITY {
        return 1.0;
    }
    if x == f64::NEG_INFINITY {
        return -1.0;
    }
    let sign = x < 0.0;
    let x = x.abs();
    if x < 0.84375 {
        let temp = if x < SMALL {
            if x < VERY_TINY {
                0.125 * (8.0 * x + EFX8 * x)
            } else {
                x + EFX * x
            }
        } else {
            let z = x * x;
            let r = PP0 + z * (PP1 + z * (PP2 + z * (PP3 + z * PP4)));
            let s = 1.0 + z * (QQ1 + z * (QQ2 + z * (QQ3 + z * (QQ4 + z * QQ5))));
            x + x * (r / s)
        };
        return if sign { -temp } else { temp };
    }
    if x < 1.25 {
        let s = x - 1.0;
        let p = PA0 + s * (PA1 + s * (PA2 + s * (PA3 + s * (PA4 + s * (PA5 + s * PA6)))));
        let q = 1.0 + s * (QA1 + s * (QA2 + s * (QA3 + s * (QA4 + s * (QA5 + s * QA6)))));
        return if sign { -ERX - p / q } else { ERX + p / q };
    }
    if x >= 6.0 {
        return if sign { -1.0 } else { 1.0 };
    }
    let s = 1.0 / (x * x);
    let (r, sd) = if x < 1.0 / 0.35 {
        (
            RA0 + s * (RA1 + s * (RA2 + s * (RA3 + s * (RA4 + s * (RA5 + s * (RA6 + s * RA7)))))),
            1.0 + s
                * (SA1
                    + s * (SA2
                        + s * (SA3 + s * (SA4 + s * (SA5 + s * (SA6 + s * (SA7 + s * SA8))))))),
        )
    } else {
        (
            RB0 + s * (RB1 + s * (RB2 + s * (RB3 + s * (RB4 + s * (RB5 + s * RB6))))),
            1.0 + s * (SB1 + s * (SB2 + s * (SB3 + s * (SB4 + s * (SB5 + s * (SB6 + s * SB7)))))),
        )
    };
    let z = f64::from_bits(x.to_bits() & 0xffff_ffff_0000_0000);
    let v = (-z * z - 0.5625).exp() * ((z - x) * (z + x) + r / sd).exp();
    if sign {
        v / x - 1.0
    } else {
        1.0 - v / x
    }
}

/// Complementary error function erfc(x) = 1 - erf(x).
pub fn erfc(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x == f64::INFINITY {
        return 0.0;
    }
    if x == f64::NEG_INFINITY {
        return 2.0;
    }
    let sign = x < 0.0;
    let x = x.abs();
    if x < 0.84375 {
        let temp = if x < TINY {
            x
        } else {
            let z = x * x;
            let r = PP0 + z * (PP1 + z * (PP2 + z * (PP3 + z * PP4)));
            let s = 1.0 + z * (QQ1 + z * (QQ2 + z * (QQ3 + z * (QQ4 + z * QQ5))));
            let y = r / s;
            if x < 0.25 {
                x + x * y
            } else {
                0.5 + (x * y + (x - 0.5))
            }
        };
        return if sign { 1.0 + temp } else { 1.0 - temp };
    }
    if x < 1.25 {
        let s = x - 1.0;
        let p = PA0 + s * (PA1 + s * (PA2 + s * (PA3 + s * (PA4 + s * (PA5 + s * PA6)))));
        let q = 1.0 + s * (QA1 + s * (QA2 + s * (QA3 + s * (QA4 + s * (QA5 + s * QA6)))));
        return if sign {
            1.0 + ERX + p / q
        } else {
            1.0 - ERX - p / q
        };
    }
    if x < 28.0 {
        let s = 1.0 / (x * x);
        let (r, sd) = if x < 1.0 / 0.35 {
            (
                RA0 + s
                    * (RA1 + s * (RA2 + s * (RA3 + s * (RA4 + s * (RA5 + s * (RA6 + s * RA7)))))),
                1.0 + s
                    * (SA1
                        + s * (SA2
                            + s * (SA3
                                + s * (SA4 + s * (SA5 + s * (SA6 + s * (SA7 + s * SA8))))))),
            )
        } else {
            if sign && x > 6.0 {
                return 2.0;
            }
            (
                RB0 + s * (RB1 + s * (RB2 + s * (RB3 + s * (RB4 + s * (RB5 + s * RB6))))),
                1.0 + s
                    * (SB1 + s * (SB2 + s * (SB3 + s * (SB4 + s * (SB5 + s * (SB6 + s * SB7)))))),
            )
        };
        let z = f64::from_bits(x.to_bits() & 0xffff_ffff_0000_0000);
        let v = (-z * z - 0.5625).exp() * ((z - x) * (z + x) + r / sd).exp();
        return if sign { 2.0 - v / x } else { v / x };
    }
    if sign {
        2.0
    } else {
        0.0
    }
}

/// Natural log of the gamma function for x > 0 (Lanczos, g = 7, n = 9).
pub fn ln_gamma(x: f64) -> f64 {
    const COEF: [f64; 9] = [
        0.99999999999980993,
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    ];
    if x < 0.5 {
        // reflection: Γ(x)Γ(1-x) = π / sin(πx)
        return (PI / (PI * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let z = x - 1.0;
    let mut ag = COEF[0];
    for (i, c) in COEF.iter().enumerate().skip(1) {
        ag += c / (z + i as f64);
    }
    let t = z + 7.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + ag.ln()
}

/// Gamma function for x > 0.
pub fn gamma(x: f64) -> f64 {
    ln_gamma(x).exp()
}

/// Digamma function ψ(x) = Γ'(x)/Γ(x) for x > 0.
pub fn digamma(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    let mut x = x;
    let mut result = 0.0;
    // shift to x >= 10 where the truncated asymptotic series is < 1e-13 off
    while x < 10.0 {
        result -= 1.0 / x;
        x += 1.0;
    }
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    // ψ(x) ~ ln x - 1/(2x) - Σ B_2n / (2n x^{2n})
    result + x.ln() - 0.5 * inv
        - inv2
            * (1.0 / 12.0
                - inv2
                    * (1.0 / 120.0 - inv2 * (1.0 / 252.0 - inv2 * (1.0 / 240.0 - inv2 / 132.0))))
}

/// Regularized lower incomplete gamma P(a, x) = γ(a, x)/Γ(a), a > 0, x >= 0.
///
/// Series for x < a + 1, Lentz continued fraction otherwise.
pub fn gamma_p(a: f64, x: f64) -> f64 {
    debug_assert!(a > 0.0 && x >= 0.0);
    if x == 0.0 {
        return 0.0;
    }
    if x < a + 1.0 {
        // series: P = x^a e^-x / Γ(a) Σ x^n / (a)_{n+1}
        let mut ap = a;
        let mut sum = 1.0 / a;
        let mut del = sum;
        for _ in 0..500 {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if del.abs() < sum.abs() * 1e-16 {
                break;
            }
        }
        (a * x.ln() - x - ln_gamma(a)).exp() * sum
    } else {
        1.0 - gamma_q_cf(a, x)
    }
}

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
pub fn gamma_q(a: f64, x: f64) -> f64 {
    debug_assert!(a > 0.0 && x >= 0.0);
    if x == 0.0 {
        return 1.0;
    }
    if x < a + 1.0 {
        1.0 - gamma_p(a, x)
    } else {
        gamma_q_cf(a, x)
    }
}

fn gamma_q_cf(a: f64, x: f64) -> f64 {
    // modified Lentz for the continued fraction of Q(a, x)
    const FPMIN: f64 = 1e-300;
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / FPMIN;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..500 {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = b + an / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < 1e-16 {
            break;
        }
    }
    (a * x.ln() - x - ln_gamma(a)).exp() * h
}

/// Modified Bessel function of the second kind K_ν(x), real order ν >= 0, x > 0.
///
/// Temme series for x <= 2, Steed/CF2 evaluation otherwise, followed by the
/// standard upward recurrence in the order.
pub fn bessel_k(nu: f64, x: f64) -> f64 {
    debug_assert!(nu >= 0.0 && x > 0.0);
    let nl = (nu + 0.5).floor() as i32; // number of upward recurrences
    let mu = nu - nl as f64; // |mu| <= 1/2
    let (mut k0, mut k1) = if x <= 2.0 {
        bessel_k_temme(mu, x)
    } else {
        bessel_k_cf2(mu, x)
    };
    // recur upward: K_{ν+1}(x) = K_{ν-1}(x) + 2ν/x K_ν(x)
    let mut ord = mu;
    for _ in 0..nl {
        let k2 = k0 + k1 * (2.0 * (ord + 1.0) / x);
        k0 = k1;
        k1 = k2;
        ord += 1.0;
    }
    k0
}

/// Temme's series for K_mu(x) and K_{mu+1}(x), |mu| <= 1/2, 0 < x <= 2.
fn bessel_k_temme(mu: f64, x: f64) -> (f64, f64) {
    const EPS: f64 = 1e-16;
    let x2 = 0.5 * x;
    let pimu = PI * mu;
    let fact = if pimu.abs() < EPS {
        1.0
    } else {
        pimu / pimu.sin()
    };
    let d = -x2.ln();
    let e = mu * d;
    let fact2 = if e.abs() < EPS { 1.0 } else { e.sinh() / e };
    let (gam1, gam2, gampl, gammi) = temme_gam(mu);
    let mut ff = fact * (gam1 * (e.cosh()) + gam2 * fact2 * d);
    let mut sum = ff;
    let e = e.exp();
    let mut p = 0.5 * e / gampl;
    let mut q = 0.5 / (e * gammi);
    let mut c = 1.0;
    let d2 = x2 * x2;
    let mut sum1 = p;
    for i in 1..1000 {
        let fi = i as f64;
        ff = (fi * ff + p + q) / (fi * fi - mu * mu);
        c *= d2 / fi;
        p /= fi - mu;
        q /= fi + mu;
        let del = c * ff;
        sum += del;
        let del1 = c * (p - fi * ff);
        sum1 += del1;
        if del.abs() < sum.abs() * EPS {
            break;
        }
    }
    let kmu = sum;
    let knu1 = sum1 * 2.0 / x;
    (kmu, knu1)
}

/// Temme's Γ corrections: gam1 = [1/Γ(1-μ) - 1/Γ(1+μ)]/(2μ),
/// gam2 = [1/Γ(1-μ) + 1/Γ(1+μ)]/2, plus 1/Γ(1+μ) and 1/Γ(1-μ) themselves.
fn temme_gam(mu: f64) -> (f64, f64, f64, f64) {
    let gampl = 1.0 / gamma(1.0 + mu); // 1/Γ(1+μ)
    let gammi = 1.0 / gamma(1.0 - mu); // 1/Γ(1-μ)
    let gam1 = if mu.abs() < 1e-4 {
        // series limit: gam1 → -γ with an O(μ²) correction below 1e-9
        -0.5772156649015329
    } else {
        (gammi - gampl) / (2.0 * mu)
    };
    let gam2 = 0.5 * (gammi + gampl);
    (gam1, gam2, gampl, gammi)
}

/// Steed's CF2 for K_mu(x), x > 2.
fn bessel_k_cf2(mu: f64, x: f64) -> (f64, f64) {
    const EPS: f64 = 1e-16;
    const FPMIN: f64 = 1e-300;
    let mu2 = mu * mu;
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut h = d;
    let mut delh = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let a1 = 0.25 - mu2;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 2..10000 {
        let fi = i as f64;
        a -= 2.0 * (fi - 1.0);
        c = -a * c / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        delh *= b * d - 1.0;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < EPS {
            break;
        }
    }
    let h = a1 * h;
    let kmu = (PI / (2.0 * x)).sqrt() * (-x).exp() / s;
    let knu1 = kmu * (mu + x + 0.5 - h) / x;
    (kmu, knu1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn erf_reference_values() {
        assert_eq!(erf(0.0), 0.0);
        assert_relative_eq!(erf(0.1), 0.1124629160182849, max_relative = 1e-14);
        assert_relative_eq!(erf(1.0), 0.8427007929497149, max_relative = 1e-14);
        assert_relative_eq!(erf(2.0), 0.9953222650189527, max_relative = 1e-14);
        assert_relative_eq!(erf(-1.5), -0.9661051464753107, max_relative = 1e-14);
    }

    #[test]
    fn erfc_reference_values() {
        assert_eq!(erfc(0.0), 1.0);
        assert_relative_eq!(erfc(0.5), 0.4795001221869535, max_relative = 1e-14);
        assert_relative_eq!(erfc(1.0), 0.15729920705028513, max_relative = 1e-14);
        assert_relative_eq!(erfc(2.0), 0.004677734981047266, max_relative = 1e-13);
        assert_relative_eq!(erfc(3.0), 2.209049699858544e-5, max_relative = 1e-13);
        assert_relative_eq!(erfc(5.0), 1.5374597944280351e-12, max_relative = 1e-13);
        assert_relative_eq!(erfc(10.0), 2.088487583762545e-45, max_relative = 1e-12);
        assert_relative_eq!(erfc(-1.0), 1.8427007929497148, max_relative = 1e-14);
    }

    #[test]
    fn erf_erfc_complementary() {
        for i in 0..200 {
            let x = -4.0 + 8.0 * (i as f64) / 199.0;
            assert_relative_eq!(erf(x) + erfc(x), 1.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn ln_gamma_reference_values() {
        assert_relative_eq!(ln_gamma(5.0), 24.0_f64.ln(), max_relative = 1e-13);
        assert_relative_eq!(ln_gamma(0.5), PI.sqrt().ln(), max_relative = 1e-13);
        assert_relative_eq!(ln_gamma(1.0), 0.0, epsilon = 1e-13);
        // independent product form: ln G(10.5) = ln G(0.5) + sum ln(0.5 + k)
        let by_product: f64 =
            PI.sqrt().ln() + (0..10).map(|k| (0.5 + k as f64).ln()).sum::<f64>();
        assert_relative_eq!(ln_gamma(10.5), by_product, max_relative = 1e-13);
        // Γ(x+1) = x Γ(x)
        for &x in &[0.3, 1.7, 4.2, 9.9] {
            assert_relative_eq!(
                ln_gamma(x + 1.0),
                ln_gamma(x) + x.ln(),
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn digamma_reference_values() {
        const EULER: f64 = 0.5772156649015329;
        assert_relative_eq!(digamma(1.0), -EULER, max_relative = 1e-12);
        assert_relative_eq!(digamma(2.0), 1.0 - EULER, max_relative = 1e-12);
        assert_relative_eq!(
            digamma(0.5),
            -EULER - 2.0 * 2.0_f64.ln(),
            max_relative = 1e-12
        );
        // recurrence ψ(x+1) = ψ(x) + 1/x
        for &x in &[0.2, 1.3, 7.7, 33.0] {
            assert_relative_eq!(
                digamma(x + 1.0),
                digamma(x) + 1.0 / x,
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn incomplete_gamma_special_cases() {
        // P(1, x) = 1 - e^-x
        for &x in &[0.1, 1.0, 3.0, 10.0] {
            assert_relative_eq!(gamma_p(1.0, x), 1.0 - (-x).exp(), max_relative = 1e-13);
        }
        // P(1/2, x) = erf(√x)
        for &x in &[0.2, 1.0, 4.0] {
            assert_relative_eq!(gamma_p(0.5, x), erf(x.sqrt()), max_relative = 1e-12);
        }
        // complementarity
        for &(a, x) in &[(0.7, 0.3), (3.0, 5.0), (12.0, 8.0)] {
            assert_relative_eq!(gamma_p(a, x) + gamma_q(a, x), 1.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn bessel_k_half_order_closed_form() {
        // K_{1/2}(x) = sqrt(π/(2x)) e^{-x}
        for &x in &[0.3, 1.0, 2.5, 7.0] {
            let expect = (PI / (2.0 * x)).sqrt() * (-x).exp();
            assert_relative_eq!(bessel_k(0.5, x), expect, max_relative = 1e-11);
        }
        // K_{3/2}(x) = sqrt(π/(2x)) e^{-x} (1 + 1/x)
        for &x in &[0.5, 1.5, 4.0] {
            let expect = (PI / (2.0 * x)).sqrt() * (-x).exp() * (1.0 + 1.0 / x);
            assert_relative_eq!(bessel_k(1.5, x), expect, max_relative = 1e-11);
        }
    }

    #[test]
    fn bessel_k_integer_reference() {
        assert_relative_eq!(bessel_k(0.0, 1.0), 0.42102443824070834, max_relative = 1e-10);
        assert_relative_eq!(bessel_k(1.0, 1.0), 0.6019072301972346, max_relative = 1e-10);
        // recurrence consistency K_2 = K_0 + 2 K_1 / x
        let k0 = bessel_k(0.0, 1.0);
        let k1 = bessel_k(1.0, 1.0);
        assert_relative_eq!(bessel_k(2.0, 1.0), k0 + 2.0 * k1, max_relative = 1e-10);
    }

    #[test]
    fn bessel_k_non_integer_recurrence() {
        for &x in &[0.7, 1.9, 6.3] {
            let nu = 0.37;
            let a = bessel_k(nu, x);
            let b = bessel_k(nu + 1.0, x);
            let c = bessel_k(nu + 2.0, x);
            assert_relative_eq!(c, a + 2.0 * (nu + 1.0) / x * b, max_relative = 1e-9);
        }
    }
}

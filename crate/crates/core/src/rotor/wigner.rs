//! Wigner 3-j symbols and rotation matrices.

use std::sync::OnceLock;

const TABLE: usize = 512;

fn ln_factorials() -> &'static [f64] {
    static T: OnceLock<Vec<f64>> = OnceLock::new();
    T.get_or_init(|| {
        let mut t = vec![0.0; TABLE];
        for n in 1..TABLE {
            t[n] = t[n - 1] + (n as f64).ln();
        }
        t
    })
}

fn ln_fact(n: i64) -> f64 {
    assert!(n >= 0 && (n as usize) < TABLE, "factorial argument {n} out of range");
    ln_factorials()[n as usize]
}

fn sign(n: i64) -> f64 {
    if n.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Wigner 3-j symbol (j₁ j₂ j₃; m₁ m₂ m₃) for integer arguments by the Racah
/// formula. Arguments violating the selection rules give exactly 0.
pub fn wigner3j(j1: i64, j2: i64, j3: i64, m1: i64, m2: i64, m3: i64) -> f64 {
    if m1 + m2 + m3 != 0 || j1 < 0 || j2 < 0 || j3 < 0 {
        return 0.0;
    }
    if m1.abs() > j1 || m2.abs() > j2 || m3.abs() > j3 {
        return 0.0;
    }
    if j3 < (j1 - j2).abs() || j3 > j1 + j2 {
        return 0.0;
    }
    if m1 == 0 && m2 == 0 && m3 == 0 && (j1 + j2 + j3) % 2 == 1 {
        return 0.0;
    }
    let tri = ln_fact(j1 + j2 - j3) + ln_fact(j1 - j2 + j3) + ln_fact(-j1 + j2 + j3) - ln_fact(j1 + j2 + j3 + 1);
    let pre = 0.5
        * (tri
            + ln_fact(j1 + m1)
            + ln_fact(j1 - m1)
            + ln_fact(j2 + m2)
            + ln_fact(j2 - m2)
            + ln_fact(j3 + m3)
            + ln_fact(j3 - m3));
    let kmin = 0.max(j2 - j3 - m1).max(j1 - j3 + m2);
    let kmax = (j1 + j2 - j3).min(j1 - m1).min(j2 + m2);
    let mut sum = 0.0;
    for k in kmin..=kmax {
        let den = ln_fact(k)
            + ln_fact(j1 + j2 - j3 - k)
            + ln_fact(j1 - m1 - k)
            + ln_fact(j2 + m2 - k)
            + ln_fact(j3 - j2 + m1 + k)
            + ln_fact(j3 - j1 - m2 + k);
        sum += sign(k) * (pre - den).exp();
    }
    sign(j1 - j2 - m3) * sum
}

/// ⟨ℓ m k| D^{ℓ″*}_{m″k″}(R̂) |ℓ′ m′ k′⟩ between normalized symmetric-top states.
#[allow(clippy::too_many_arguments)]
pub fn wigner_d_element(l: i64, m: i64, k: i64, lp: i64, mp: i64, kp: i64, lpp: i64, mpp: i64, kpp: i64) -> f64 {
    let a = wigner3j(l, lp, lpp, -m, mp, mpp);
    if a == 0.0 {
        return 0.0;
    }
    sign(m - k) * (((2 * l + 1) * (2 * lp + 1)) as f64).sqrt() * a * wigner3j(l, lp, lpp, -k, kp, kpp)
}

/// Small Wigner matrix d^ℓ_{m m′}(β) by the explicit sum.
pub fn wigner_small_d(l: i64, m: i64, mp: i64, beta: f64) -> f64 {
    if m.abs() > l || mp.abs() > l {
        return 0.0;
    }
    let (s, c) = (0.5 * beta).sin_cos();
    let pre = 0.5 * (ln_fact(l + m) + ln_fact(l - m) + ln_fact(l + mp) + ln_fact(l - mp));
    let smin = 0.max(mp - m);
    let smax = (l + mp).min(l - m);
    let mut sum = 0.0;
    for k in smin..=smax {
        let den = ln_fact(l + mp - k) + ln_fact(k) + ln_fact(m - mp + k) + ln_fact(l - m - k);
        let pc = 2 * l + mp - m - 2 * k;
        let ps = m - mp + 2 * k;
        let trig = c.powi(pc as i32) * s.powi(ps as i32);
        if trig != 0.0 {
            sum += sign(m - mp + k) * (pre - den).exp() * trig;
        }
    }
    sum
}

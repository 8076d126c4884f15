//! Integer-order Bessel functions and the equal-hopping propagator.
//!
//! `J_n(x)` comes from Miller's backward recurrence
//! `J_{k-1} = (2k/x) J_k − J_{k+1}`, normalized with
//! `J_0 + 2 Σ_{k≥1} J_{2k} = 1`.

use num_complex::Complex64 as C64;

const RESCALE_ABOVE: f64 = 1e250;
const RESCALE_BY: f64 = 1e-250;
const ZERO_FIELD: f64 = 1e-12;

/// `J_0(x), …, J_nmax(x)`.
pub fn bessel_j_range(nmax: usize, x: f64) -> Vec<f64> {
    let mut out = vec![0.0; nmax + 1];
    if x == 0.0 {
        out[0] = 1.0;
        return out;
    }
    if !x.is_finite() {
        let fill = if x.is_nan() { f64::NAN } else { 0.0 };
        out.iter_mut().for_each(|v| *v = fill);
        return out;
    }
    let ax = x.abs();
    let top = (nmax as f64).max(ax);
    let mut m = (top + 30.0 + (60.0 * top).sqrt()).ceil() as usize;
    m += m % 2;

    let mut next = 0.0; // J_{k+1}
    let mut cur = 1e-300; // J_k, k = m
    let mut norm = 0.0;
    for k in (1..=m).rev() {
        if k <= nmax {
            out[k] = cur;
        }
        if k % 2 == 0 {
            norm += 2.0 * cur;
        }
        let prev = 2.0 * k as f64 / ax * cur - next;
        next = cur;
        cur = prev;
        if cur.abs() > RESCALE_ABOVE {
            cur *= RESCALE_BY;
            next *= RESCALE_BY;
            norm *= RESCALE_BY;
            out[..=nmax.min(m)].iter_mut().for_each(|v| *v *= RESCALE_BY);
        }
    }
    out[0] = cur;
    norm += cur;
    for (k, v) in out.iter_mut().enumerate() {
        *v /= norm;
        if x < 0.0 && k % 2 == 1 {
            *v = -*v;
        }
    }
    out
}

/// `J_n(x)` for any integer order.
pub fn bessel_j(n: i64, x: f64) -> f64 {
    let order = n.unsigned_abs() as usize;
    let v = bessel_j_range(order, x)[order];
    if n < 0 && order % 2 == 1 {
        -v
    } else {
        v
    }
}

/// Argument `(Δ/F) sin(F t / 2)`, continued to `Δ t / 2` at zero field.
fn propagator_argument(t: f64, delta: f64, f: f64) -> f64 {
    if f.abs() < ZERO_FIELD {
        delta * t / 2.0
    } else {
        delta / f * (f * t / 2.0).sin()
    }
}

fn i_pow(n: i64) -> C64 {
    match n.rem_euclid(4) {
        0 => C64::new(1.0, 0.0),
        1 => C64::new(0.0, 1.0),
        2 => C64::new(-1.0, 0.0),
        _ => C64::new(0.0, -1.0),
    }
}

/// Infinite-chain propagator for equal hoppings `Δa = Δb = delta` in a
/// constant field `f`:
/// `U(l, l'; t) = i^{l−l'} J_{l−l'}(x) e^{−i(l+l') F t / 2}`.
pub fn bessel_propagator(l: i64, l_src: i64, t: f64, delta: f64, f: f64) -> C64 {
    let x = propagator_argument(t, delta, f);
    let n = l - l_src;
    let phase = C64::from_polar(1.0, -((l + l_src) as f64) * f * t / 2.0);
    i_pow(n) * bessel_j(n, x) * phase
}

/// Applies the infinite-chain propagator to amplitudes on sites
/// `0..psi0.len()`, returning amplitudes on the same sites.
pub fn bessel_evolve(psi0: &[C64], t: f64, delta: f64, f: f64) -> Vec<C64> {
    let n = psi0.len();
    if n == 0 {
        return Vec::new();
    }
    let x = propagator_argument(t, delta, f);
    let table = bessel_j_range(n - 1, x);
    let jn = |d: i64| {
        let v = table[d.unsigned_abs() as usize];
        if d < 0 && d % 2 != 0 {
            -v
        } else {
            v
        }
    };
    (0..n as i64)
        .map(|l| {
            psi0.iter()
                .enumerate()
                .filter(|(_, a)| a.norm_sqr() > 0.0)
                .map(|(src, a)| {
                    let src = src as i64;
                    let phase = C64::from_polar(1.0, -((l + src) as f64) * f * t / 2.0);
                    i_pow(l - src) * jn(l - src) * phase * a
                })
                .sum()
        })
        .collect()
}

/// Closed-form mean position for equal hoppings:
/// `⟨l(t)⟩ = ⟨l(0)⟩ − |S₀| (Δ/2F) [cos θ₀ − cos(F t + θ₀)]`,
/// with `S₀ = Σ ψ*(l+1, 0) ψ(l, 0)`.
pub fn bloch_mean_position(psi0: &[C64], t: f64, delta: f64, f: f64) -> f64 {
    let norm: f64 = psi0.iter().map(|a| a.norm_sqr()).sum();
    let mean0 = psi0.iter().enumerate().map(|(l, a)| l as f64 * a.norm_sqr()).sum::<f64>() / norm;
    let s0: C64 = psi0.windows(2).map(|w| w[1].conj() * w[0]).sum::<C64>() / norm;
    let (mag, theta) = s0.to_polar();
    let swing = if f.abs() < ZERO_FIELD {
        delta / 2.0 * t * theta.sin()
    } else {
        delta / (2.0 * f) * (theta.cos() - (f * t + theta).cos())
    };
    mean0 - mag * swing
}

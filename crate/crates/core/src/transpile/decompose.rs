use std::f64::consts::PI;

use super::basis::{is_zero_angle, BasisCircuit, ANGLE_EPS};
use crate::circuit::{Circuit, Op};
use crate::error::Result;
use crate::statevector::{pauli_x, Matrix2, Polarity};

const ENTRY_EPS: f64 = 1e-14;

/// `(α, θ, φ, λ)` with `u = e^{iα} U3(θ, φ, λ)`.
pub fn zyz(u: &Matrix2) -> (f64, f64, f64, f64) {
    let [[a, b], [c, d]] = *u;
    let theta = 2.0 * c.norm().atan2(a.norm());
    if theta < ANGLE_EPS {
        return (a.arg(), 0.0, 0.0, d.arg() - a.arg());
    }
    if a.norm() < ENTRY_EPS {
        let alpha = c.arg();
        return (alpha, theta, 0.0, b.arg() + PI - alpha);
    }
    let alpha = a.arg();
    (alpha, theta, c.arg() - alpha, b.arg() + PI - alpha)
}

fn adjoint(u: &Matrix2) -> Matrix2 {
    [[u[0][0].conj(), u[1][0].conj()], [u[0][1].conj(), u[1][1].conj()]]
}

fn is_x(u: &Matrix2) -> bool {
    let x = pauli_x();
    (0..2).all(|r| (0..2).all(|c| (u[r][c] - x[r][c]).norm() < ENTRY_EPS))
}

/// A unitary square root, `(U + sI)/√(tr U + 2s)` with `s = ±√det U`.
fn sqrt2(u: &Matrix2) -> Matrix2 {
    let det = u[0][0] * u[1][1] - u[0][1] * u[1][0];
    let tr = u[0][0] + u[1][1];
    let mut s = det.sqrt();
    if (tr + s * 2.0).norm() < 1e-6 {
        s = -s;
    }
    let t = (tr + s * 2.0).sqrt();
    [[(u[0][0] + s) / t, u[0][1] / t], [u[1][0] / t, (u[1][1] + s) / t]]
}

fn single(out: &mut BasisCircuit, target: usize, u: &Matrix2) {
    let (alpha, theta, phi, lambda) = zyz(u);
    out.global_phase += alpha;
    out.u3(theta, phi, lambda, target);
}

/// Singly controlled `u` with two CX gates.
fn controlled(out: &mut BasisCircuit, control: usize, target: usize, u: &Matrix2) {
    if is_x(u) {
        out.cx(control, target);
        return;
    }
    let (alpha, theta, phi, lambda) = zyz(u);
    if theta == 0.0 && is_zero_angle(phi + lambda) {
        out.u1(alpha, control);
        return;
    }
    out.u1(alpha + (lambda + phi) / 2.0, control);
    out.u1((lambda - phi) / 2.0, target);
    out.cx(control, target);
    out.u3(-theta / 2.0, 0.0, -(phi + lambda) / 2.0, target);
    out.cx(control, target);
    out.u3(theta / 2.0, phi, 0.0, target);
}

fn h(out: &mut BasisCircuit, q: usize) {
    out.u3(PI / 2.0, 0.0, PI, q);
}

/// Six-CX Toffoli.
fn toffoli(out: &mut BasisCircuit, a: usize, b: usize, t: usize) {
    let (tg, tdg) = (PI / 4.0, -PI / 4.0);
    h(out, t);
    out.cx(b, t);
    out.u1(tdg, t);
    out.cx(a, t);
    out.u1(tg, t);
    out.cx(b, t);
    out.u1(tdg, t);
    out.cx(a, t);
    out.u1(tg, b);
    out.u1(tg, t);
    h(out, t);
    out.cx(a, b);
    out.u1(tg, a);
    out.u1(tdg, b);
    out.cx(a, b);
}

/// `u` on `target` conditioned on every qubit in `controls` being 1.
fn multi_controlled(out: &mut BasisCircuit, controls: &[usize], target: usize, u: &Matrix2) {
    match controls {
        [] => single(out, target, u),
        [c] => controlled(out, *c, target, u),
        [a, b] if is_x(u) => toffoli(out, *a, *b, target),
        [rest @ .., last] => {
            let v = sqrt2(u);
            let x = pauli_x();
            controlled(out, *last, target, &v);
            multi_controlled(out, rest, *last, &x);
            controlled(out, *last, target, &adjoint(&v));
            multi_controlled(out, rest, *last, &x);
            multi_controlled(out, rest, target, &v);
        }
    }
}

/// `diag(e^{iφ(x)})` as a product of `exp(i a_S Z_S)` factors, each a CX
/// parity ladder around one `U1`.
fn diagonal(out: &mut BasisCircuit, qubits: &[usize], phases: &[f64]) {
    let k = qubits.len();
    let dim = 1usize << k;
    for subset in 0..dim {
        let a = phases
            .iter()
            .enumerate()
            .map(|(x, p)| if (subset & x).count_ones() % 2 == 0 { *p } else { -*p })
            .sum::<f64>()
            / dim as f64;
        if subset == 0 {
            out.global_phase += a;
            continue;
        }
        if a.abs() < ANGLE_EPS {
            continue;
        }
        let members: Vec<usize> = (0..k).filter(|j| subset >> j & 1 == 1).map(|j| qubits[j]).collect();
        let (&last, rest) = members.split_last().expect("non-empty subset");
        for &q in rest {
            out.cx(q, last);
        }
        out.global_phase += a;
        out.u1(-2.0 * a, last);
        for &q in rest.iter().rev() {
            out.cx(q, last);
        }
    }
}

/// Lowers every op to `U1`, `U3` and `CX`. The product of the output times
/// `e^{i·global_phase}` equals the input unitary.
pub fn decompose(circuit: &Circuit) -> Result<BasisCircuit> {
    let mut out = BasisCircuit::new(circuit.qubit_count());
    for op in circuit.ops() {
        match op {
            Op::Controlled(g) => {
                let flipped: Vec<usize> =
                    g.controls().iter().filter(|c| c.polarity == Polarity::Zero).map(|c| c.qubit).collect();
                flipped.iter().for_each(|&q| out.x(q));
                let controls: Vec<usize> = g.controls().iter().map(|c| c.qubit).collect();
                multi_controlled(&mut out, &controls, g.target(), g.unitary());
                flipped.iter().for_each(|&q| out.x(q));
            }
            Op::Diagonal(g) => diagonal(&mut out, g.qubits(), g.phases()),
        }
    }
    out.global_phase = out.global_phase.rem_euclid(2.0 * PI);
    if 2.0 * PI - out.global_phase < ANGLE_EPS {
        out.global_phase = 0.0;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64 as C64;
    use crate::statevector::{phase, x_rotation, Control, ControlledGate, DiagonalGate};
    use crate::transpile::{count, max_deviation_up_to_phase, u3_matrix, BasisGate};

    fn check_exact(c: &Circuit) -> BasisCircuit {
        let b = decompose(c).unwrap();
        let src = c.unitary().unwrap();
        let dec = b.unitary().unwrap();
        let dev = (&src - &dec).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(dev < 1e-12, "deviation {dev}");
        b
    }

    fn some_unitary(seed: f64) -> Matrix2 {
        let m = u3_matrix(0.3 + seed, 1.1 * seed, -0.7 + seed);
        let g = C64::from_polar(1.0, 0.4 * seed);
        [[m[0][0] * g, m[0][1] * g], [m[1][0] * g, m[1][1] * g]]
    }

    #[test]
    fn zyz_round_trip() {
        for u in [some_unitary(0.2), some_unitary(2.5), pauli_x(), phase(0.8), x_rotation(0.3), [[C64::new(0.0, 0.0), C64::new(0.0, 1.0)], [C64::new(0.0, 1.0), C64::new(0.0, 0.0)]]] {
            let (alpha, theta, phi, lambda) = zyz(&u);
            let r = u3_matrix(theta, phi, lambda);
            for i in 0..2 {
                for j in 0..2 {
                    assert!((r[i][j] * C64::from_polar(1.0, alpha) - u[i][j]).norm() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn bare_x_is_one_u3() {
        let mut c = Circuit::new(1, "x");
        c.push(ControlledGate::x(0, vec![]).unwrap()).unwrap();
        let b = check_exact(&c);
        assert_eq!(b.ops, vec![BasisGate::U3 { theta: PI, phi: 0.0, lambda: PI, qubit: 0 }]);
    }

    #[test]
    fn cx_is_one_cx() {
        let mut c = Circuit::new(2, "cx");
        c.push(ControlledGate::x(1, vec![Control::on(0)]).unwrap()).unwrap();
        let b = check_exact(&c);
        assert_eq!(b.ops, vec![BasisGate::Cx { control: 0, target: 1 }]);
    }

    #[test]
    fn controlled_general_unitaries() {
        for seed in [0.0, 0.7, 1.9, 3.0] {
            for pol in [Control::on(1), Control::off(1)] {
                let mut c = Circuit::new(2, "cu");
                c.push(ControlledGate::new(0, vec![pol], some_unitary(seed)).unwrap()).unwrap();
                check_exact(&c);
            }
        }
        let mut c = Circuit::new(2, "cphase");
        c.push(ControlledGate::new(1, vec![Control::on(0)], phase(0.9)).unwrap()).unwrap();
        assert_eq!(count(&check_exact(&c)).cx, 2);
    }

    #[test]
    fn multi_controlled_gates() {
        for n_controls in 2..=4 {
            let controls: Vec<Control> = (1..=n_controls).map(|q| if q % 2 == 0 { Control::off(q) } else { Control::on(q) }).collect();
            let mut c = Circuit::new(n_controls + 1, "mcx");
            c.push(ControlledGate::x(0, controls.clone()).unwrap()).unwrap();
            check_exact(&c);
            let mut c = Circuit::new(n_controls + 1, "mcu");
            c.push(ControlledGate::new(0, controls, some_unitary(1.3)).unwrap()).unwrap();
            check_exact(&c);
        }
    }

    #[test]
    fn toffoli_uses_six_cx() {
        let mut c = Circuit::new(3, "ccx");
        c.push(ControlledGate::x(2, vec![Control::on(0), Control::on(1)]).unwrap()).unwrap();
        assert_eq!(count(&check_exact(&c)).cx, 6);
    }

    #[test]
    fn diagonal_gates() {
        let mut c = Circuit::new(3, "diag");
        c.push(DiagonalGate::new(vec![2, 0], vec![0.1, -0.4, 1.7, 2.2]).unwrap()).unwrap();
        c.push(DiagonalGate::new(vec![], vec![0.6]).unwrap()).unwrap();
        c.push(DiagonalGate::new(vec![1], vec![0.0, 0.3]).unwrap()).unwrap();
        let b = check_exact(&c);
        assert!(b.global_phase != 0.0);
    }

    #[test]
    fn parity_diagonal_is_a_ladder() {
        let phases: Vec<f64> = (0..16).map(|x: usize| if x.count_ones().is_multiple_of(2) { -0.2 } else { 0.2 }).collect();
        let mut c = Circuit::new(4, "zzzz");
        c.push(DiagonalGate::new(vec![0, 1, 2, 3], phases).unwrap()).unwrap();
        let counts = count(&check_exact(&c));
        assert_eq!((counts.cx, counts.u1, counts.u3), (6, 1, 0));
    }

    #[test]
    fn phase_only_deviation_helper() {
        let mut c = Circuit::new(1, "p");
        c.push(ControlledGate::new(0, vec![], some_unitary(0.9)).unwrap()).unwrap();
        let mut b = decompose(&c).unwrap();
        b.global_phase += 1.0;
        let src = c.unitary().unwrap();
        assert!(max_deviation_up_to_phase(&src, &b.unitary().unwrap()) < 1e-13);
    }
}

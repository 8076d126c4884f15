use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::oracle::dense::DenseOperator;
use crate::statevector::{Control, ControlledGate, Matrix2};

/// Angles closer than this to a multiple of `2π` are treated as zero.
pub(crate) const ANGLE_EPS: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BasisGate {
    U1 { lambda: f64, qubit: usize },
    U3 { theta: f64, phi: f64, lambda: f64, qubit: usize },
    Cx { control: usize, target: usize },
}

impl BasisGate {
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            BasisGate::U1 { qubit, .. } | BasisGate::U3 { qubit, .. } => vec![qubit],
            BasisGate::Cx { control, target } => vec![control, target],
        }
    }

    fn to_controlled(self) -> Result<ControlledGate> {
        match self {
            BasisGate::U1 { lambda, qubit } => ControlledGate::new(qubit, vec![], u3_matrix(0.0, 0.0, lambda)),
            BasisGate::U3 { theta, phi, lambda, qubit } => ControlledGate::new(qubit, vec![], u3_matrix(theta, phi, lambda)),
            BasisGate::Cx { control, target } => ControlledGate::x(target, vec![Control::on(control)]),
        }
    }
}

/// `U3(θ, φ, λ) = [[cos θ/2, −e^{iλ} sin θ/2], [e^{iφ} sin θ/2, e^{i(φ+λ)} cos θ/2]]`.
pub fn u3_matrix(theta: f64, phi: f64, lambda: f64) -> Matrix2 {
    let (s, c) = (theta / 2.0).sin_cos();
    [
        [C64::new(c, 0.0), -C64::from_polar(s, lambda)],
        [C64::from_polar(s, phi), C64::from_polar(c, phi + lambda)],
    ]
}

pub(crate) fn is_zero_angle(x: f64) -> bool {
    let r = x.rem_euclid(2.0 * PI);
    r < ANGLE_EPS || 2.0 * PI - r < ANGLE_EPS
}

/// Basis-gate sequence with an explicit global phase: the represented
/// unitary is `e^{iγ} · (product of ops)`.
#[derive(Clone, Debug, PartialEq)]
pub struct BasisCircuit {
    pub qubit_count: usize,
    pub ops: Vec<BasisGate>,
    pub global_phase: f64,
}

impl BasisCircuit {
    pub fn new(qubit_count: usize) -> Self {
        Self { qubit_count, ops: Vec::new(), global_phase: 0.0 }
    }

    pub fn push(&mut self, gate: BasisGate) -> Result<()> {
        for q in gate.qubits() {
            if q >= self.qubit_count {
                return Err(Error::QubitOutOfRange { qubit: q, count: self.qubit_count });
            }
        }
        if let BasisGate::Cx { control, target } = gate {
            if control == target {
                return Err(Error::DuplicateQubit(control));
            }
        }
        self.ops.push(gate);
        Ok(())
    }

    /// Appends `U1(λ)` unless it is the identity.
    pub(crate) fn u1(&mut self, lambda: f64, qubit: usize) {
        if !is_zero_angle(lambda) {
            self.ops.push(BasisGate::U1 { lambda, qubit });
        }
    }

    /// Appends `U3(θ, φ, λ)`, falling back to `U1(φ + λ)` when `θ = 0`.
    pub(crate) fn u3(&mut self, theta: f64, phi: f64, lambda: f64, qubit: usize) {
        if is_zero_angle(theta) {
            self.u1(phi + lambda, qubit);
        } else {
            self.ops.push(BasisGate::U3 { theta, phi, lambda, qubit });
        }
    }

    pub(crate) fn x(&mut self, qubit: usize) {
        self.ops.push(BasisGate::U3 { theta: PI, phi: 0.0, lambda: PI, qubit });
    }

    pub(crate) fn cx(&mut self, control: usize, target: usize) {
        self.ops.push(BasisGate::Cx { control, target });
    }

    /// Same ops as a [`Circuit`]; the global phase is dropped.
    pub fn to_circuit(&self) -> Result<Circuit> {
        let mut c = Circuit::new(self.qubit_count, "basis");
        for g in &self.ops {
            c.push(g.to_controlled()?)?;
        }
        Ok(c)
    }

    /// Unitary including the global phase.
    pub fn unitary(&self) -> Result<DenseOperator> {
        let phase = C64::from_polar(1.0, self.global_phase);
        Ok(self.to_circuit()?.unitary()? * phase)
    }
}

/// `max_ij |a_ij e^{iφ} − b_ij|` with `φ` aligning the largest entry of `a`
/// to the matching entry of `b`.
pub fn max_deviation_up_to_phase(a: &DenseOperator, b: &DenseOperator) -> f64 {
    if a.shape() != b.shape() {
        return f64::INFINITY;
    }
    let (idx, _) = a.iter().enumerate().fold((0, -1.0), |best, (i, z)| if z.norm() > best.1 { (i, z.norm()) } else { best });
    let ratio = b.as_slice()[idx] / a.as_slice()[idx];
    let phase = ratio / ratio.norm();
    a.iter().zip(b.iter()).map(|(x, y)| (x * phase - y).norm()).fold(0.0, f64::max)
}

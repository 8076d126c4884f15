//! Bit-indexed statevector storage and gate application.
//!
//! Qubit 0 is the least-significant bit of the basis index. With two
//! registers of `Γ` qubits each, particle 1 occupies the high bits and
//! particle 2 the low bits, so the basis state `|l1, l2⟩` has index
//! `l1 * N + l2` with `N = 2^Γ`.

use std::io::{BufRead, Write};

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Row-major 2x2 complex matrix.
pub type Matrix2 = [[C64; 2]; 2];

const UNITARY_TOL: f64 = 1e-12;
const NORM_TOL: f64 = 1e-10;

/// Value a control qubit must hold for the target unitary to fire.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Polarity {
    /// Filled-circle control.
    One,
    /// Open-circle control.
    Zero,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Control {
    pub qubit: usize,
    pub polarity: Polarity,
}

impl Control {
    pub fn on(qubit: usize) -> Self {
        Self { qubit, polarity: Polarity::One }
    }

    pub fn off(qubit: usize) -> Self {
        Self { qubit, polarity: Polarity::Zero }
    }
}

/// A single-qubit unitary on `target`, conditioned on a set of controls.
#[derive(Clone, Debug, PartialEq)]
pub struct ControlledGate {
    target: usize,
    controls: Vec<Control>,
    unitary: Matrix2,
}

impl ControlledGate {
    /// Builds a gate, rejecting non-unitary blocks and controls that overlap
    /// the target or each other.
    pub fn new(target: usize, controls: Vec<Control>, unitary: Matrix2) -> Result<Self> {
        let deviation = unitarity_deviation(&unitary);
        if !(deviation < UNITARY_TOL) {
            return Err(Error::NotUnitary { deviation });
        }
        for (i, c) in controls.iter().enumerate() {
            if c.qubit == target || controls[..i].iter().any(|o| o.qubit == c.qubit) {
                return Err(Error::DuplicateQubit(c.qubit));
            }
        }
        Ok(Self { target, controls, unitary })
    }

    /// Multi-controlled X.
    pub fn x(target: usize, controls: Vec<Control>) -> Result<Self> {
        Self::new(target, controls, pauli_x())
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn controls(&self) -> &[Control] {
        &self.controls
    }

    pub fn unitary(&self) -> &Matrix2 {
        &self.unitary
    }

    /// Largest qubit index touched by the gate.
    pub fn max_qubit(&self) -> usize {
        self.controls.iter().map(|c| c.qubit).fold(self.target, usize::max)
    }

    /// Same gate with every qubit index shifted by `offset`.
    pub fn shifted(&self, offset: usize) -> Self {
        Self {
            target: self.target + offset,
            controls: self
                .controls
                .iter()
                .map(|c| Control { qubit: c.qubit + offset, polarity: c.polarity })
                .collect(),
            unitary: self.unitary,
        }
    }

    fn masks(&self) -> (usize, usize) {
        let mut mask = 0;
        let mut value = 0;
        for c in &self.controls {
            mask |= 1 << c.qubit;
            if c.polarity == Polarity::One {
                value |= 1 << c.qubit;
            }
        }
        (mask, value)
    }
}

/// A diagonal unitary over `qubits`, stored as phase angles.
///
/// Entry `k` of `phases` belongs to the local basis state whose bit `j` is
/// the value of `qubits[j]`. An empty qubit list is a global phase.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalGate {
    qubits: Vec<usize>,
    phases: Vec<f64>,
}

impl DiagonalGate {
    pub fn new(qubits: Vec<usize>, phases: Vec<f64>) -> Result<Self> {
        for (i, q) in qubits.iter().enumerate() {
            if qubits[..i].contains(q) {
                return Err(Error::DuplicateQubit(*q));
            }
        }
        let expected = 1usize << qubits.len();
        if phases.len() != expected {
            return Err(Error::DiagonalLength { expected, got: phases.len() });
        }
        Ok(Self { qubits, phases })
    }

    /// Builds a gate from explicit diagonal entries, which must have unit
    /// modulus.
    pub fn from_diagonal(qubits: Vec<usize>, diagonal: &[C64]) -> Result<Self> {
        for (index, d) in diagonal.iter().enumerate() {
            let modulus = d.norm();
            if !((modulus - 1.0).abs() < UNITARY_TOL) {
                return Err(Error::NotUnitModulus { index, modulus });
            }
        }
        Self::new(qubits, diagonal.iter().map(|d| d.arg()).collect())
    }

    pub fn qubits(&self) -> &[usize] {
        &self.qubits
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    pub fn diagonal(&self) -> Vec<C64> {
        self.phases.iter().map(|&p| C64::from_polar(1.0, p)).collect()
    }

    pub fn max_qubit(&self) -> Option<usize> {
        self.qubits.iter().copied().max()
    }

    pub fn shifted(&self, offset: usize) -> Self {
        Self {
            qubits: self.qubits.iter().map(|q| q + offset).collect(),
            phases: self.phases.clone(),
        }
    }

    /// Local diagonal index of a full basis index.
    pub fn local_index(&self, index: usize) -> usize {
        self.qubits
            .iter()
            .enumerate()
            .fold(0, |acc, (j, &q)| acc | (((index >> q) & 1) << j))
    }
}

/// Unit-norm amplitude vector over one or two registers of `Γ` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct Statevector {
    num_registers: usize,
    qubits_per_register: usize,
    amplitudes: Vec<C64>,
}

impl Statevector {
    /// Computational basis state `basis_index`.
    pub fn basis(num_registers: usize, gamma: usize, basis_index: usize) -> Result<Self> {
        check_layout(num_registers, gamma)?;
        let len = 1usize << (num_registers * gamma);
        if basis_index >= len {
            return Err(Error::IndexOutOfRange { index: basis_index, len });
        }
        let mut amplitudes = vec![C64::new(0.0, 0.0); len];
        amplitudes[basis_index] = C64::new(1.0, 0.0);
        Ok(Self { num_registers, qubits_per_register: gamma, amplitudes })
    }

    /// Wraps an amplitude vector that is already normalized to 1e-10.
    pub fn from_amplitudes(num_registers: usize, gamma: usize, amplitudes: Vec<C64>) -> Result<Self> {
        check_layout(num_registers, gamma)?;
        let expected = 1usize << (num_registers * gamma);
        if amplitudes.len() != expected {
            return Err(Error::DimensionMismatch { expected, got: amplitudes.len() });
        }
        let norm = l2_norm(&amplitudes);
        if !((norm - 1.0).abs() < NORM_TOL) {
            return Err(Error::Normalization { norm });
        }
        Ok(Self { num_registers, qubits_per_register: gamma, amplitudes })
    }

    /// Rescales `amplitudes` to unit norm before wrapping them.
    pub fn normalized(num_registers: usize, gamma: usize, mut amplitudes: Vec<C64>) -> Result<Self> {
        let norm = l2_norm(&amplitudes);
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::Normalization { norm });
        }
        amplitudes.iter_mut().for_each(|a| *a /= norm);
        Self::from_amplitudes(num_registers, gamma, amplitudes)
    }

    /// `|a⟩ ⊗ |b⟩` with `a` in the high register.
    pub fn embed_product(a: &Statevector, b: &Statevector) -> Result<Self> {
        if a.num_registers != 1 || b.num_registers != 1 {
            return Err(Error::RegisterMismatch("embed_product needs single-register inputs".into()));
        }
        if a.qubits_per_register != b.qubits_per_register {
            return Err(Error::RegisterMismatch(format!(
                "register widths differ ({} vs {})",
                a.qubits_per_register, b.qubits_per_register
            )));
        }
        let amplitudes = a
            .amplitudes
            .iter()
            .flat_map(|x| b.amplitudes.iter().map(move |y| x * y))
            .collect();
        Ok(Self { num_registers: 2, qubits_per_register: a.qubits_per_register, amplitudes })
    }

    pub fn num_registers(&self) -> usize {
        self.num_registers
    }

    pub fn qubits_per_register(&self) -> usize {
        self.qubits_per_register
    }

    pub fn num_qubits(&self) -> usize {
        self.num_registers * self.qubits_per_register
    }

    /// Sites per register, `2^Γ`.
    pub fn n_sites(&self) -> usize {
        1 << self.qubits_per_register
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        l2_norm(&self.amplitudes)
    }

    pub fn probability(&self, basis_index: usize) -> Result<f64> {
        self.amplitudes
            .get(basis_index)
            .map(|a| a.norm_sqr())
            .ok_or(Error::IndexOutOfRange { index: basis_index, len: self.len() })
    }

    pub fn apply_controlled(&mut self, gate: &ControlledGate) -> Result<()> {
        self.check_qubit(gate.max_qubit())?;
        let tbit = 1usize << gate.target;
        let (mask, value) = gate.masks();
        let [[u00, u01], [u10, u11]] = gate.unitary;
        for i in 0..self.amplitudes.len() {
            if i & tbit != 0 || i & mask != value {
                continue;
            }
            let j = i | tbit;
            let a = self.amplitudes[i];
            let b = self.amplitudes[j];
            self.amplitudes[i] = u00 * a + u01 * b;
            self.amplitudes[j] = u10 * a + u11 * b;
        }
        Ok(())
    }

    pub fn apply_diagonal(&mut self, gate: &DiagonalGate) -> Result<()> {
        if let Some(q) = gate.max_qubit() {
            self.check_qubit(q)?;
        }
        let diagonal = gate.diagonal();
        for (i, a) in self.amplitudes.iter_mut().enumerate() {
            *a *= diagonal[gate.local_index(i)];
        }
        Ok(())
    }

    /// Writes `index,re,im` rows.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "index,re,im")?;
        for (i, a) in self.amplitudes.iter().enumerate() {
            writeln!(w, "{},{},{}", i, a.re, a.im)?;
        }
        Ok(())
    }

    /// Reads a dump produced by [`Statevector::write_csv`].
    pub fn read_csv<R: BufRead>(num_registers: usize, gamma: usize, r: R) -> Result<Self> {
        let mut amplitudes = Vec::new();
        for (n, line) in r.lines().enumerate().skip(1) {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let bad = || Error::InvalidParams(format!("amplitude dump line {}: {line:?}", n + 1));
            let mut fields = line.split(',');
            let index: usize = fields.next().and_then(|s| s.trim().parse().ok()).ok_or_else(bad)?;
            let re: f64 = fields.next().and_then(|s| s.trim().parse().ok()).ok_or_else(bad)?;
            let im: f64 = fields.next().and_then(|s| s.trim().parse().ok()).ok_or_else(bad)?;
            if index != amplitudes.len() {
                return Err(bad());
            }
            amplitudes.push(C64::new(re, im));
        }
        Self::from_amplitudes(num_registers, gamma, amplitudes)
    }

    fn check_qubit(&self, qubit: usize) -> Result<()> {
        let count = self.num_qubits();
        if qubit >= count {
            return Err(Error::QubitOutOfRange { qubit, count });
        }
        Ok(())
    }
}

fn check_layout(num_registers: usize, gamma: usize) -> Result<()> {
    if !(1..=2).contains(&num_registers) {
        return Err(Error::RegisterMismatch(format!("{num_registers} registers (expected 1 or 2)")));
    }
    if gamma == 0 || num_registers * gamma > 30 {
        return Err(Error::RegisterMismatch(format!("{gamma} qubits per register")));
    }
    Ok(())
}

pub(crate) fn l2_norm(amplitudes: &[C64]) -> f64 {
    amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

fn unitarity_deviation(u: &Matrix2) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            let dot: C64 = (0..2).map(|k| u[k][i].conj() * u[k][j]).sum();
            let expected = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((dot - expected).norm());
        }
    }
    if worst.is_nan() {
        f64::INFINITY
    } else {
        worst
    }
}

pub fn identity2() -> Matrix2 {
    let (o, z) = (C64::new(1.0, 0.0), C64::new(0.0, 0.0));
    [[o, z], [z, o]]
}

pub fn pauli_x() -> Matrix2 {
    let (o, z) = (C64::new(1.0, 0.0), C64::new(0.0, 0.0));
    [[z, o], [o, z]]
}

/// `cos θ · I + i sin θ · X`, i.e. `exp(iθX)`.
pub fn x_rotation(theta: f64) -> Matrix2 {
    let c = C64::new(theta.cos(), 0.0);
    let s = C64::new(0.0, theta.sin());
    [[c, s], [s, c]]
}

/// `diag(1, e^{iλ})`.
pub fn phase(lambda: f64) -> Matrix2 {
    let (o, z) = (C64::new(1.0, 0.0), C64::new(0.0, 0.0));
    [[o, z], [z, C64::from_polar(1.0, lambda)]]
}

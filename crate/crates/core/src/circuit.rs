//! Circuit values and builders for the per-term exponentials.
//!
//! Every builder returns a [`Circuit`] whose unitary is exact for its term:
//!
//! * `e^{−iH_a δt}`: an X rotation on qubit 0, since the intra-cell pairs
//!   `(2n, 2n+1)` differ only in the lowest bit.
//! * `e^{−iH_b δt}`: the same rotation conjugated by a cyclic decrement /
//!   increment of the site register, which maps `(2n+1, 2n+2)` onto
//!   `(2n, 2n+1)` including the wrap-around pair `(N−1, 0)`.
//! * `e^{−iH_E(t) δt}`: one phase gate per qubit with angle `−2^β F(t) δt`.
//! * `e^{−iH_V δt}`: the `N` commuting parity exponentials
//!   `exp(−i V/N δt Z_S⊗Z_S)`.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::oracle::dense::DenseOperator;
use crate::statevector::{x_rotation, Control, ControlledGate, DiagonalGate, Statevector};

#[derive(Clone, Debug, PartialEq)]
pub enum Op {
    Controlled(ControlledGate),
    Diagonal(DiagonalGate),
}

impl Op {
    fn max_qubit(&self) -> Option<usize> {
        match self {
            Op::Controlled(g) => Some(g.max_qubit()),
            Op::Diagonal(g) => g.max_qubit(),
        }
    }

    fn shifted(&self, offset: usize) -> Op {
        match self {
            Op::Controlled(g) => Op::Controlled(g.shifted(offset)),
            Op::Diagonal(g) => Op::Diagonal(g.shifted(offset)),
        }
    }
}

impl From<ControlledGate> for Op {
    fn from(g: ControlledGate) -> Self {
        Op::Controlled(g)
    }
}

impl From<DiagonalGate> for Op {
    fn from(g: DiagonalGate) -> Self {
        Op::Diagonal(g)
    }
}

/// Ordered gate list; `ops[0]` acts on the state first.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    qubit_count: usize,
    ops: Vec<Op>,
    label: String,
}

impl Circuit {
    pub fn new(qubit_count: usize, label: impl Into<String>) -> Self {
        Self { qubit_count, ops: Vec::new(), label: label.into() }
    }

    pub fn qubit_count(&self) -> usize {
        self.qubit_count
    }

    pub fn ops(&self) -> &[Op] {
        &self.ops
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn push(&mut self, op: impl Into<Op>) -> Result<()> {
        let op = op.into();
        if let Some(q) = op.max_qubit() {
            if q >= self.qubit_count {
                return Err(Error::QubitOutOfRange { qubit: q, count: self.qubit_count });
            }
        }
        self.ops.push(op);
        Ok(())
    }

    /// Appends `other` with its qubits shifted up by `offset`.
    pub fn append_shifted(&mut self, other: &Circuit, offset: usize) -> Result<()> {
        for op in &other.ops {
            self.push(op.shifted(offset))?;
        }
        Ok(())
    }

    pub fn append(&mut self, other: &Circuit) -> Result<()> {
        self.append_shifted(other, 0)
    }

    pub fn apply(&self, state: &mut Statevector) -> Result<()> {
        if state.num_qubits() != self.qubit_count {
            return Err(Error::DimensionMismatch { expected: self.qubit_count, got: state.num_qubits() });
        }
        for op in &self.ops {
            match op {
                Op::Controlled(g) => state.apply_controlled(g)?,
                Op::Diagonal(g) => state.apply_diagonal(g)?,
            }
        }
        Ok(())
    }

    /// Unitary obtained by running the circuit on every basis state.
    pub fn unitary(&self) -> Result<DenseOperator> {
        let dim = 1usize << self.qubit_count;
        let mut u = DMatrix::from_element(dim, dim, C64::new(0.0, 0.0));
        for col in 0..dim {
            let mut s = Statevector::basis(1, self.qubit_count, col)?;
            self.apply(&mut s)?;
            for (row, a) in s.amplitudes().iter().enumerate() {
                u[(row, col)] = *a;
            }
        }
        Ok(u)
    }
}

impl fmt::Display for Circuit {
    /// One row per qubit, highest qubit on top, one column per op.
    /// `●`/`○` mark controls, `U` a target, `D` a diagonal factor.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} ({} qubits, {} ops)", self.label, self.qubit_count, self.ops.len())?;
        let mut rows = vec![String::new(); self.qubit_count];
        for op in &self.ops {
            let mut col = vec!['─'; self.qubit_count];
            match op {
                Op::Controlled(g) => {
                    col[g.target()] = if *g.unitary() == crate::statevector::pauli_x() { 'X' } else { 'U' };
                    for c in g.controls() {
                        col[c.qubit] = match c.polarity {
                            crate::statevector::Polarity::One => '●',
                            crate::statevector::Polarity::Zero => '○',
                        };
                    }
                }
                Op::Diagonal(g) if g.qubits().is_empty() => col.iter_mut().for_each(|c| *c = 'φ'),
                Op::Diagonal(g) => g.qubits().iter().for_each(|&q| col[q] = 'D'),
            }
            for (row, ch) in rows.iter_mut().zip(col) {
                row.push('─');
                row.push(ch);
            }
        }
        for (q, row) in rows.iter().enumerate().rev() {
            writeln!(f, "q{q:<2} {row}─")?;
        }
        Ok(())
    }
}

/// `e^{−iH_a δt}`: block rotation `cos(Δa δt/4) I + i sin(Δa δt/4) X` on
/// qubit 0.
pub fn build_exp_ha(params: &ModelParams, dt: f64) -> Result<Circuit> {
    let gamma = params.require_gamma()?;
    let mut c = Circuit::new(gamma, "exp(-i H_a dt)");
    c.push(ControlledGate::new(0, vec![], x_rotation(params.delta_a * dt / 4.0))?)?;
    Ok(c)
}

/// `|l⟩ → |l−1 mod N⟩` with open-circle controls.
pub fn decrement(gamma: usize) -> Result<Circuit> {
    let mut c = Circuit::new(gamma, "decrement");
    for j in (1..gamma).rev() {
        c.push(ControlledGate::x(j, (0..j).map(Control::off).collect())?)?;
    }
    c.push(ControlledGate::x(0, vec![])?)?;
    Ok(c)
}

/// `|l⟩ → |l+1 mod N⟩`.
pub fn increment(gamma: usize) -> Result<Circuit> {
    let mut c = Circuit::new(gamma, "increment");
    for j in (1..gamma).rev() {
        c.push(ControlledGate::x(j, (0..j).map(Control::on).collect())?)?;
    }
    c.push(ControlledGate::x(0, vec![])?)?;
    Ok(c)
}

/// `e^{−iH_b δt}` as decrement, qubit-0 rotation, increment.
pub fn build_exp_hb(params: &ModelParams, dt: f64) -> Result<Circuit> {
    let gamma = params.require_gamma()?;
    let mut c = Circuit::new(gamma, "exp(-i H_b dt)");
    c.append(&decrement(gamma)?)?;
    c.push(ControlledGate::new(0, vec![], x_rotation(params.delta_b * dt / 4.0))?)?;
    c.append(&increment(gamma)?)?;
    Ok(c)
}

/// `e^{−iH_E(t) δt}`: `diag(1, e^{−i 2^β F(t) δt})` on each qubit `β`.
pub fn build_exp_he(params: &ModelParams, t: f64, dt: f64) -> Result<Circuit> {
    let gamma = params.require_gamma()?;
    let f = params.field(t);
    let mut c = Circuit::new(gamma, "exp(-i H_E dt)");
    for beta in 0..gamma {
        let angle = -((1u64 << beta) as f64) * f * dt;
        c.push(DiagonalGate::new(vec![beta], vec![0.0, angle])?)?;
    }
    Ok(c)
}

/// First-order product `e^{−iH_a δt} e^{−iH_b δt} e^{−iH_E(t) δt}`; the
/// field term acts first.
pub fn build_trotter_step(params: &ModelParams, t: f64, dt: f64) -> Result<Circuit> {
    let gamma = params.require_gamma()?;
    let mut c = Circuit::new(gamma, "U(dt)");
    c.append(&build_exp_he(params, t, dt)?)?;
    c.append(&build_exp_hb(params, dt)?)?;
    c.append(&build_exp_ha(params, dt)?)?;
    Ok(c)
}

/// The `N` parity exponentials `exp(−i V/N δt Z_S⊗Z_S)` on two registers,
/// indexed by the subset bitmask `S`. Register 2 holds qubits `0..Γ`,
/// register 1 holds `Γ..2Γ`.
pub fn hv_parity_terms(params: &ModelParams, dt: f64) -> Result<Vec<DiagonalGate>> {
    let gamma = params.require_gamma()?;
    let n = params.n_sites;
    let angle = params.v / n as f64 * dt;
    (0..n)
        .map(|subset| {
            let bits: Vec<usize> = (0..gamma).filter(|j| subset >> j & 1 == 1).collect();
            let qubits: Vec<usize> = bits.iter().copied().chain(bits.iter().map(|j| j + gamma)).collect();
            let phases = (0..1usize << qubits.len())
                .map(|local| if local.count_ones() % 2 == 0 { -angle } else { angle })
                .collect();
            DiagonalGate::new(qubits, phases)
        })
        .collect()
}

/// `e^{−iH_V δt}` as the product of the parity exponentials.
pub fn build_exp_hv(params: &ModelParams, dt: f64) -> Result<Circuit> {
    let gamma = params.require_gamma()?;
    let mut c = Circuit::new(2 * gamma, "exp(-i H_V dt)");
    for term in hv_parity_terms(params, dt)? {
        c.push(term)?;
    }
    Ok(c)
}

/// One-particle Trotter step on each register, then the contact term.
pub fn build_two_particle_step(params: &ModelParams, t: f64, dt: f64) -> Result<Circuit> {
    let gamma = params.require_gamma()?;
    let single = build_trotter_step(params, t, dt)?;
    let mut c = Circuit::new(2 * gamma, "U2(dt)");
    c.append_shifted(&single, gamma)?;
    c.append_shifted(&single, 0)?;
    c.append(&build_exp_hv(params, dt)?)?;
    Ok(c)
}

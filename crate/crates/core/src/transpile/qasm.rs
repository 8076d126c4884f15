use std::fmt::Write as _;

use super::basis::{BasisCircuit, BasisGate};
use crate::error::{Error, Result};

const PHASE_PREFIX: &str = "// global phase:";

/// OpenQASM 2.0 text over a single register `q`. A nonzero global phase is
/// written as a comment.
pub fn emit_qasm(circuit: &BasisCircuit) -> String {
    let mut s = String::from("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    if circuit.global_phase != 0.0 {
        let _ = writeln!(s, "{PHASE_PREFIX} {}", circuit.global_phase);
    }
    let _ = writeln!(s, "qreg q[{}];", circuit.qubit_count);
    for g in &circuit.ops {
        let _ = match *g {
            BasisGate::U1 { lambda, qubit } => writeln!(s, "u1({lambda}) q[{qubit}];"),
            BasisGate::U3 { theta, phi, lambda, qubit } => writeln!(s, "u3({theta},{phi},{lambda}) q[{qubit}];"),
            BasisGate::Cx { control, target } => writeln!(s, "cx q[{control}],q[{target}];"),
        };
    }
    s
}

fn qubit_ref(text: &str, line: usize) -> Result<usize> {
    let err = || Error::QasmParse { line, message: format!("bad qubit reference `{text}`") };
    let inner = text.trim().strip_prefix("q[").and_then(|r| r.strip_suffix(']')).ok_or_else(err)?;
    inner.trim().parse().map_err(|_| err())
}

fn angles(text: &str, line: usize) -> Result<Vec<f64>> {
    text.split(',')
        .map(|a| a.trim().parse::<f64>().map_err(|_| Error::QasmParse { line, message: format!("bad angle `{a}`") }))
        .collect()
}

/// Reads the subset of OpenQASM 2.0 that [`emit_qasm`] writes.
pub fn parse_qasm(text: &str) -> Result<BasisCircuit> {
    let mut circuit: Option<BasisCircuit> = None;
    let mut phase = 0.0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let s = raw.trim();
        if let Some(rest) = s.strip_prefix(PHASE_PREFIX) {
            phase = rest.trim().parse().map_err(|_| Error::QasmParse { line, message: "bad global phase".into() })?;
            continue;
        }
        if s.is_empty() || s.starts_with("//") || s.starts_with("OPENQASM") || s.starts_with("include") {
            continue;
        }
        let stmt = s.strip_suffix(';').ok_or_else(|| Error::QasmParse { line, message: "missing `;`".into() })?;
        if let Some(rest) = stmt.strip_prefix("qreg") {
            if circuit.is_some() {
                return Err(Error::QasmParse { line, message: "only one qreg is supported".into() });
            }
            circuit = Some(BasisCircuit::new(qubit_ref(rest, line)?));
            continue;
        }
        let c = circuit.as_mut().ok_or_else(|| Error::QasmParse { line, message: "gate before qreg".into() })?;
        let gate = if let Some(rest) = stmt.strip_prefix("cx") {
            let (a, b) = rest.split_once(',').ok_or_else(|| Error::QasmParse { line, message: "cx needs two qubits".into() })?;
            BasisGate::Cx { control: qubit_ref(a, line)?, target: qubit_ref(b, line)? }
        } else if let Some(rest) = stmt.strip_prefix("u1(").or_else(|| stmt.strip_prefix("u3(")) {
            let (args, q) = rest.split_once(')').ok_or_else(|| Error::QasmParse { line, message: "unclosed `(`".into() })?;
            let qubit = qubit_ref(q, line)?;
            match (stmt.as_bytes()[1], angles(args, line)?.as_slice()) {
                (b'1', &[lambda]) => BasisGate::U1 { lambda, qubit },
                (b'3', &[theta, phi, lambda]) => BasisGate::U3 { theta, phi, lambda, qubit },
                _ => return Err(Error::QasmParse { line, message: "wrong number of angles".into() }),
            }
        } else {
            return Err(Error::QasmParse { line, message: format!("unsupported statement `{stmt}`") });
        };
        c.push(gate).map_err(|e| Error::QasmParse { line, message: e.to_string() })?;
    }
    let mut c = circuit.ok_or(Error::QasmParse { line: 0, message: "no qreg".into() })?;
    c.global_phase = phase;
    Ok(c)
}

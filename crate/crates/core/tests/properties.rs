use std::f64::consts::PI;

use blochsim_core::circuit::{build_exp_ha, build_exp_hb, build_exp_he, build_trotter_step, build_two_particle_step, Circuit};
use blochsim_core::observables::{dispersion, site_probabilities, sublattice_probability, ws_ladder, Band};
use blochsim_core::oracle::dense::{self, unitarity_deviation, DenseOperator};
use blochsim_core::transpile::{count, decompose, emit_qasm, parse_qasm, u3_matrix, BasisCircuit, BasisGate};
use blochsim_core::{Control, ControlledGate, DiagonalGate, Matrix2, ModelParams, Statevector};
use num_complex::Complex64 as C64;
use proptest::prelude::*;

fn unitary() -> impl Strategy<Value = Matrix2> {
    (0.0..PI, -PI..PI, -PI..PI, -PI..PI).prop_map(|(t, p, l, a)| {
        let g = C64::from_polar(1.0, a);
        let m = u3_matrix(t, p, l);
        [[m[0][0] * g, m[0][1] * g], [m[1][0] * g, m[1][1] * g]]
    })
}

#[derive(Clone, Debug)]
enum Gate {
    Controlled(ControlledGate),
    Diagonal(DiagonalGate),
}

fn gate(n_qubits: usize) -> impl Strategy<Value = Gate> {
    let controlled = (0..n_qubits, prop::collection::vec(any::<(bool, bool)>(), n_qubits), unitary()).prop_map(move |(target, picks, u)| {
        let controls = picks
            .iter()
            .enumerate()
            .filter(|&(q, (used, _))| q != target && *used)
            .map(|(q, &(_, one))| if one { Control::on(q) } else { Control::off(q) })
            .collect();
        Gate::Controlled(ControlledGate::new(target, controls, u).unwrap())
    });
    let diagonal = (prop::sample::subsequence((0..n_qubits).collect::<Vec<_>>(), 0..=n_qubits), prop::collection::vec(-PI..PI, 1 << n_qubits))
        .prop_map(|(qubits, phases)| {
            let k = qubits.len();
            Gate::Diagonal(DiagonalGate::new(qubits, phases[..1 << k].to_vec()).unwrap())
        });
    prop_oneof![3 => controlled, 1 => diagonal]
}

fn apply(sv: &mut Statevector, g: &Gate) {
    match g {
        Gate::Controlled(g) => sv.apply_controlled(g).unwrap(),
        Gate::Diagonal(g) => sv.apply_diagonal(g).unwrap(),
    }
}

fn random_state(n_qubits: usize) -> impl Strategy<Value = Statevector> {
    prop::collection::vec((-1.0..1.0, -1.0..1.0), 1 << n_qubits).prop_filter_map("zero vector", move |v| {
        let amps: Vec<C64> = v.into_iter().map(|(re, im)| C64::new(re, im)).collect();
        Statevector::normalized(1, n_qubits, amps).ok()
    })
}

fn to_circuit(n_qubits: usize, gates: &[Gate]) -> Circuit {
    let mut c = Circuit::new(n_qubits, "random");
    for g in gates {
        match g {
            Gate::Controlled(g) => c.push(g.clone()).unwrap(),
            Gate::Diagonal(g) => c.push(g.clone()).unwrap(),
        }
    }
    c
}

fn max_abs(a: &DenseOperator, b: &DenseOperator) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn params(gamma: usize) -> impl Strategy<Value = ModelParams> {
    (0.0..6.0, 0.0..6.0, -2.0..2.0, 0.0..1.0, 0.0..4.0, -10.0..10.0).prop_map(move |(da, db, f, fac, w, v)| {
        ModelParams::new(1 << gamma).unwrap().with_hopping(da, db).with_field(f).with_ac_field(fac, w).with_interaction(v)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(4))]

    #[test]
    fn norm_survives_ten_thousand_gates(gates in prop::collection::vec(gate(4), 10_000)) {
        let mut sv = Statevector::basis(1, 4, 5).unwrap();
        for g in &gates {
            apply(&mut sv, g);
        }
        prop_assert!((sv.norm() - 1.0).abs() < 1e-10);
    }
}

proptest! {
    #[test]
    fn gates_are_linear(g in gate(3), x in random_state(3), y in random_state(3), a in (-1.0..1.0, -1.0..1.0), b in (-1.0..1.0, -1.0..1.0)) {
        let (a, b) = (C64::new(a.0, a.1), C64::new(b.0, b.1));
        let combo: Vec<C64> = x.amplitudes().iter().zip(y.amplitudes()).map(|(p, q)| a * p + b * q).collect();
        let scale = combo.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        prop_assume!(scale > 1e-3);
        let mut z = Statevector::normalized(1, 3, combo).unwrap();
        let (mut gx, mut gy) = (x.clone(), y.clone());
        apply(&mut z, &g);
        apply(&mut gx, &g);
        apply(&mut gy, &g);
        for i in 0..8 {
            let expected = (a * gx.amplitudes()[i] + b * gy.amplitudes()[i]) / scale;
            prop_assert!((z.amplitudes()[i] - expected).norm() < 1e-12);
        }
    }

    #[test]
    fn application_is_deterministic(gates in prop::collection::vec(gate(3), 1..50), s in random_state(3)) {
        let (mut a, mut b) = (s.clone(), s);
        for g in &gates {
            apply(&mut a, g);
        }
        for g in &gates {
            apply(&mut b, g);
        }
        prop_assert_eq!(a.amplitudes(), b.amplitudes());
    }

    #[test]
    fn term_circuits_match_dense_exponentials(gamma in 1usize..=3, p in params(3), t in 0.0..3.0, dt in 0.001..0.3) {
        let p = ModelParams { n_sites: 1 << gamma, ..p };
        let pairs = [
            (build_exp_ha(&p, dt).unwrap(), dense::h_a(&p)),
            (build_exp_hb(&p, dt).unwrap(), dense::h_b(&p)),
            (build_exp_he(&p, t, dt).unwrap(), dense::h_e(&p, t)),
        ];
        for (circuit, h) in &pairs {
            let u = circuit.unitary().unwrap();
            prop_assert!(unitarity_deviation(&u) < 1e-12);
            prop_assert!(max_abs(&u, &dense::dense_exp(h, dt).unwrap()) < 1e-12);
        }
        let step = build_trotter_step(&p, t, dt).unwrap().unitary().unwrap();
        let product = &pairs[0].0.unitary().unwrap() * &pairs[1].0.unitary().unwrap() * &pairs[2].0.unitary().unwrap();
        prop_assert!(max_abs(&step, &product) < 1e-12);
    }

    #[test]
    fn two_particle_step_matches_oracle_product(gamma in 1usize..=2, p in params(2), dt in 0.001..0.2) {
        let p = ModelParams { n_sites: 1 << gamma, ..p };
        let u = build_two_particle_step(&p, 0.0, dt).unwrap().unitary().unwrap();
        let single = build_trotter_step(&p, 0.0, dt).unwrap().unitary().unwrap();
        let n = p.n_sites;
        let mut hv = DenseOperator::zeros(n * n, n * n);
        for l in 0..n {
            hv[(l * n + l, l * n + l)] = C64::new(p.v, 0.0);
        }
        let expected = dense::dense_exp(&hv, dt).unwrap() * single.kronecker(&single);
        prop_assert!(max_abs(&u, &expected) < 1e-12);
    }

    #[test]
    fn decomposition_is_exact(gates in prop::collection::vec(gate(3), 1..8)) {
        let c = to_circuit(3, &gates);
        let b = decompose(&c).unwrap();
        prop_assert!(max_abs(&c.unitary().unwrap(), &b.unitary().unwrap()) < 1e-10);
        let again = decompose(&b.to_circuit().unwrap()).unwrap();
        prop_assert_eq!(count(&again), count(&b));
    }

    #[test]
    fn qasm_round_trip(ops in prop::collection::vec((0usize..3, 0usize..4, 0usize..4, -10.0..10.0, -10.0..10.0, -10.0..10.0), 0..30), phase in 0.0..6.0) {
        let mut b = BasisCircuit::new(4);
        for (kind, q, r, x, y, z) in ops {
            let g = match kind {
                0 => BasisGate::U1 { lambda: x, qubit: q },
                1 => BasisGate::U3 { theta: x, phi: y, lambda: z, qubit: q },
                _ if q != r => BasisGate::Cx { control: q, target: r },
                _ => continue,
            };
            b.push(g).unwrap();
        }
        b.global_phase = phase;
        prop_assert_eq!(parse_qasm(&emit_qasm(&b)).unwrap(), b);
    }

    #[test]
    fn probabilities_are_complete(s in random_state(4)) {
        let total: f64 = site_probabilities(s.amplitudes()).iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-10);
        let (a, b) = sublattice_probability(s.amplitudes());
        prop_assert!((a + b - 1.0).abs() < 1e-10);
    }

    #[test]
    fn dispersion_is_symmetric(da in 0.0..8.0, db in 0.0..8.0, k in -10.0..10.0) {
        let p = ModelParams::new(4).unwrap().with_hopping(da, db);
        let (up, lo) = dispersion(&p, k);
        prop_assert_eq!(up, -lo);
        prop_assert!((up - dispersion(&p, -k).0).abs() < 1e-12);
        prop_assert!((up - dispersion(&p, k + PI).0).abs() < 1e-12);
    }

    #[test]
    fn ladders_are_arithmetic(da in 0.5f64..6.0, db in 0.5f64..6.0, f in 0.1f64..2.0) {
        prop_assume!((da - db).abs() > 0.2);
        let p = ModelParams::new(4).unwrap().with_hopping(da, db);
        for band in [Band::Upper, Band::Lower] {
            let lad = ws_ladder(&p, f, band, -5..=5).unwrap();
            for w in lad.energies.windows(2) {
                prop_assert!((w[1] - w[0] - 2.0 * f).abs() < 1e-12);
            }
        }
    }
}

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use blochsim_core::circuit::{build_trotter_step, build_two_particle_step, Circuit};
use blochsim_core::evolve::{make_initial, run, Stepper};
use blochsim_core::observables::{
    dispersion, site_probabilities, spectrum, sublattice_position, ws_ladder, Band, ObservableSeries,
};
use blochsim_core::oracle::bessel::{bessel_evolve, bloch_mean_position};
use blochsim_core::oracle::dense::{self, SpectralPropagator};
use blochsim_core::transpile::{count, decompose, emit_qasm, max_deviation_up_to_phase, REFERENCE_COUNTS};
use num_complex::Complex64 as C64;
use serde_json::json;

use crate::config::{RunConfig, Scenario};

/// Files written by one run, relative to the output directory.
#[derive(Debug, Default)]
pub struct Artifacts {
    pub dir: PathBuf,
    pub files: Vec<String>,
}

impl Artifacts {
    fn create(&mut self, name: &str) -> Result<BufWriter<File>> {
        let path = self.dir.join(name);
        let file = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
        self.files.push(name.to_string());
        Ok(BufWriter::new(file))
    }
}

/// Executes `config` and writes its artifacts plus `manifest.json` into
/// `dir`.
pub fn run_scenario(config: &RunConfig, dir: &Path) -> Result<Artifacts> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut out = Artifacts { dir: dir.to_path_buf(), files: Vec::new() };
    let mut extra = serde_json::Map::new();
    match config.scenario {
        Scenario::SingleExact | Scenario::SingleTrotter | Scenario::SingleOde => single(config, &mut out)?,
        Scenario::TwoParticle => two_particle(config, &mut out)?,
        Scenario::Spectrum => spectrum_table(config, &mut out)?,
        Scenario::Dispersion => dispersion_table(config, &mut out)?,
        Scenario::Ladder => ladder_table(config, &mut out)?,
        Scenario::TranspileReport => {
            let step = build_trotter_step(&config.params(), config.plan.dt, config.plan.dt)?;
            let dev = write_circuit(&step, &mut out)?;
            extra.insert("decomposition_deviation".into(), json!(dev));
        }
        Scenario::BesselCheck => bessel_check(config, &mut out)?,
        Scenario::Dim2 => dim2(config, &mut out)?,
    }
    write_manifest(config, &mut out, extra)?;
    Ok(out)
}

fn write_manifest(config: &RunConfig, out: &mut Artifacts, extra: serde_json::Map<String, serde_json::Value>) -> Result<()> {
    let mut resolved = serde_json::to_value(config)?;
    if let Some(map) = resolved.as_object_mut() {
        map.remove("output");
    }
    let mut physics = json!({ "model": config.params() });
    if evolves(config.scenario) {
        physics["plan"] = json!(config.plan());
        physics["initial"] = json!(config.initial_kind());
    } else if config.scenario == Scenario::TranspileReport {
        physics["dt"] = json!(config.plan.dt);
    }
    if config.scenario == Scenario::Dim2 {
        physics["model_y"] = json!(config.params_y());
        physics["initial_y"] = json!(config.initial_kind_y());
    }
    let mut files = out.files.clone();
    files.push("manifest.json".into());
    let manifest = json!({
        "program": env!("CARGO_PKG_NAME"),
        "version": env!("CARGO_PKG_VERSION"),
        "scenario": config.scenario,
        "resolved": physics,
        "config": resolved,
        "report": extra,
        "outputs": files,
    });
    let mut w = out.create("manifest.json")?;
    serde_json::to_writer_pretty(&mut w, &manifest)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn evolves(s: Scenario) -> bool {
    matches!(s, Scenario::SingleExact | Scenario::SingleTrotter | Scenario::SingleOde | Scenario::TwoParticle | Scenario::BesselCheck | Scenario::Dim2)
}

/// Decomposes `circuit`, writes `circuit.qasm` and `counts.json`, and
/// returns the up-to-phase deviation of the basis circuit.
fn write_circuit(circuit: &Circuit, out: &mut Artifacts) -> Result<f64> {
    let basis = decompose(circuit)?;
    let dev = max_deviation_up_to_phase(&circuit.unitary()?, &basis.unitary()?);
    let mut w = out.create("circuit.qasm")?;
    w.write_all(emit_qasm(&basis).as_bytes())?;
    w.flush()?;
    let counts = count(&basis);
    let report = json!({
        "qubits": circuit.qubit_count(),
        "counts": counts,
        "reference": if circuit.qubit_count() == 3 { json!(REFERENCE_COUNTS) } else { json!(null) },
    });
    let mut w = out.create("counts.json")?;
    serde_json::to_writer_pretty(&mut w, &report)?;
    writeln!(w)?;
    w.flush()?;
    Ok(dev)
}

fn write_series(series: &ObservableSeries, out: &mut Artifacts) -> Result<()> {
    let mut w = out.create("series.csv")?;
    series.write_csv(&mut w)?;
    w.flush()?;
    Ok(())
}

fn single(config: &RunConfig, out: &mut Artifacts) -> Result<()> {
    let params = config.params();
    let plan = config.plan();
    let traj = run(&make_initial(config.initial_kind(), &params)?, &params, &plan)?;
    let mut w = out.create("trajectory.csv")?;
    traj.write_csv(&mut w)?;
    w.flush()?;
    if traj.states.is_empty() {
        let mut series = ObservableSeries::new("sites", &["l_mean", "p_a", "p_b"]);
        for (t, probs) in traj.times.iter().zip(&traj.probabilities) {
            let mean = probs.iter().enumerate().map(|(l, p)| l as f64 * p).sum();
            let pa = probs.iter().step_by(2).sum::<f64>();
            series.push(*t, vec![mean, pa, 1.0 - pa])?;
        }
        write_series(&series, out)?;
    } else {
        write_series(&ObservableSeries::sublattice(&traj.times, &traj.states)?, out)?;
    }
    if plan.stepper == Stepper::Trotter1 {
        write_circuit(&build_trotter_step(&params, plan.sample_time(1), plan.dt)?, out)?;
    }
    Ok(())
}

fn two_particle(config: &RunConfig, out: &mut Artifacts) -> Result<()> {
    let params = config.params();
    let plan = config.plan();
    let n = params.n_sites;
    let traj = run(&make_initial(config.initial_kind(), &params)?, &params, &plan)?;
    let mut w = out.create("trajectory.csv")?;
    traj.write_csv(&mut w)?;
    w.flush()?;
    let [l1, l2] = config.two_particle.track;
    let mut series = ObservableSeries::new("two-particle", &["p_track", "l1_mean", "l2_mean", "p_same_site"]);
    for (t, probs) in traj.times.iter().zip(&traj.probabilities) {
        let (m1, m2) = marginal_means(probs, n);
        let same = (0..n).map(|l| probs[l * n + l]).sum();
        series.push(*t, vec![probs[l1 * n + l2], m1, m2, same])?;
    }
    write_series(&series, out)?;
    if plan.stepper == Stepper::Trotter1 {
        write_circuit(&build_two_particle_step(&params, plan.sample_time(1), plan.dt)?, out)?;
    }
    Ok(())
}

fn marginal_means(probs: &[f64], n: usize) -> (f64, f64) {
    probs.iter().enumerate().fold((0.0, 0.0), |(a, b), (i, p)| (a + (i / n) as f64 * p, b + (i % n) as f64 * p))
}

fn spectrum_table(config: &RunConfig, out: &mut Artifacts) -> Result<()> {
    let params = config.params();
    let fields = if config.spectrum.fields.is_empty() { vec![params.f_dc] } else { config.spectrum.fields.clone() };
    let mut w = out.create("spectrum.csv")?;
    writeln!(w, "f,index,energy")?;
    for f in fields {
        for (i, e) in spectrum(&params, f)?.iter().enumerate() {
            writeln!(w, "{f},{i},{e}")?;
        }
    }
    w.flush()?;
    Ok(())
}

fn dispersion_table(config: &RunConfig, out: &mut Artifacts) -> Result<()> {
    let params = config.params();
    let m = config.dispersion.points;
    let mut w = out.create("spectrum.csv")?;
    writeln!(w, "k,upper,lower")?;
    for i in 0..m {
        let k = -std::f64::consts::FRAC_PI_2 + std::f64::consts::PI * i as f64 / (m - 1) as f64;
        let (up, lo) = dispersion(&params, k);
        writeln!(w, "{k},{up},{lo}")?;
    }
    w.flush()?;
    Ok(())
}

fn ladder_table(config: &RunConfig, out: &mut Artifacts) -> Result<()> {
    let params = config.params();
    let range = config.ladder.alpha_min..=config.ladder.alpha_max;
    let mut w = out.create("spectrum.csv")?;
    writeln!(w, "band,alpha,energy")?;
    for band in [Band::Upper, Band::Lower] {
        let ladder = ws_ladder(&params, params.f_dc, band, range.clone())?;
        let name = if band == Band::Upper { "upper" } else { "lower" };
        for (a, e) in ladder.alphas.iter().zip(&ladder.energies) {
            writeln!(w, "{name},{a},{e}")?;
        }
    }
    w.flush()?;
    Ok(())
}

fn bessel_check(config: &RunConfig, out: &mut Artifacts) -> Result<()> {
    let params = config.params();
    let plan = config.plan();
    let init = make_initial(config.initial_kind(), &params)?;
    let traj = run(&init, &params, &plan)?;
    let mut w = out.create("trajectory.csv")?;
    traj.write_csv(&mut w)?;
    w.flush()?;
    let (delta, f) = (params.delta_a, params.f_dc);
    let n = params.n_sites;
    let mut series = ObservableSeries::new("bessel", &["l_mean", "l_mean_closed", "amp_dev", "edge_prob"]);
    for (t, psi) in traj.times.iter().zip(&traj.states) {
        let reference = bessel_evolve(init.amplitudes(), *t, delta, f);
        let dev = psi.iter().zip(&reference).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        let edge = psi[0].norm_sqr() + psi[n - 1].norm_sqr();
        let closed = bloch_mean_position(init.amplitudes(), *t, delta, f);
        series.push(*t, vec![sublattice_position(psi).mean, closed, dev, edge])?;
    }
    write_series(&series, out)
}

fn dim2(config: &RunConfig, out: &mut Artifacts) -> Result<()> {
    let (px, py) = (config.params(), config.params_y());
    let ny = py.n_sites;
    let h = dense::h_2d(&px, &py, 0.0);
    let mut w = out.create("spectrum.csv")?;
    writeln!(w, "index,energy")?;
    for (i, e) in dense::eigenvalues(&h)?.iter().enumerate() {
        writeln!(w, "{i},{e}")?;
    }
    w.flush()?;

    let sx = make_initial(config.initial_kind(), &px)?;
    let sy = make_initial(config.initial_kind_y(), &py)?;
    let product = kron(sx.amplitudes(), sy.amplitudes());
    let joint = SpectralPropagator::new(&h)?;
    let (ux, uy) = (SpectralPropagator::new(&dense::h_sv(&px, 0.0))?, SpectralPropagator::new(&dense::h_sv(&py, 0.0))?);
    let mut w = out.create("trajectory.csv")?;
    writeln!(w, "t,lx,ly,prob")?;
    let mut series = ObservableSeries::new("dim2", &["x_mean", "y_mean", "product_dev"]);
    for k in 0..=config.plan.n_steps {
        let t = k as f64 * config.plan.dt;
        let psi = joint.apply(&product, t);
        let separate = kron(&ux.apply(sx.amplitudes(), t), &uy.apply(sy.amplitudes(), t));
        let dev = psi.iter().zip(&separate).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        let probs = site_probabilities(&psi);
        let (mut xm, mut ym) = (0.0, 0.0);
        for (i, p) in probs.iter().enumerate() {
            let (lx, ly) = (i / ny, i % ny);
            xm += lx as f64 * p;
            ym += ly as f64 * p;
            writeln!(w, "{t},{lx},{ly},{p}")?;
        }
        series.push(t, vec![xm, ym, dev])?;
    }
    w.flush()?;
    write_series(&series, out)
}

fn kron(a: &[C64], b: &[C64]) -> Vec<C64> {
    a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect()
}


use std::collections::BTreeMap;
use std::f64::consts::SQRT_2;

use hrwave::encodings::{check_gse, jw_lower, random_even_graph, GseCheck, GseGraph, GseGraphFile, JwLayout, Theory};
use hrwave::haag_ruelle::{leakage_sweep, lcu_simulate, lcu_simulate_product, scaling_study, PacketParams, PacketSystem, ScalingTable, SuccessReport, Validity};
use hrwave::interpolators::{interpolators_1d, qcd_nucleon, qcd_pion, Counting, Formulation, Interpolator, Layout1D, Nucleon, PionCharge};
use hrwave::lattice::{build_hamiltonian_1d, eigh, Boundary, LatticeSpec1D, Model1D, Sector, StaggeredIdentification};
use hrwave::links::DiagonalTable;
use hrwave::pauli::OperatorSum;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use super::config::{Encoder, ExperimentConfig};
use super::{CliError, Outcome};

const RHO_TOL: f64 = 1e-10;
const PRODUCT_TOL: f64 = 1e-8;
const EXACT_TOL: f64 = 1e-12;

fn spec(cfg: &ExperimentConfig, sites: usize, cutoff: usize) -> LatticeSpec1D {
    let l = &cfg.lattice;
    LatticeSpec1D { theory: l.theory, sites, spacing: l.spacing, mass: l.mass, coupling: l.coupling, cutoff, boundary: l.boundary, truncation: l.truncation }
}

fn first_spec(cfg: &ExperimentConfig) -> LatticeSpec1D {
    spec(cfg, cfg.lattice.sites[0], cfg.lattice.cutoffs[0])
}

fn system(cfg: &ExperimentConfig) -> Result<PacketSystem, CliError> {
    Ok(PacketSystem::new(first_spec(cfg), &cfg.packet.interpolator, cfg.packet.threshold)?)
}

fn params(cfg: &ExperimentConfig, sys: &PacketSystem) -> PacketParams {
    let p = &cfg.packet;
    PacketParams { x_center: p.x_center, ..sys.params(p.k_center, p.delta_p, p.duration, p.epsilon) }
}

fn register_width(spec: LatticeSpec1D) -> Result<usize, CliError> {
    Ok(Model1D::new(spec)?.width())
}

#[derive(Serialize)]
struct SpectrumSummary {
    sites: usize,
    cutoff: usize,
    dim: usize,
    vacuum_energy: f64,
    gap: f64,
    branch: Vec<hrwave::lattice::BranchPoint>,
    hermiticity_defect: f64,
    orthonormality_defect: f64,
    tolerance: f64,
}

#[derive(Serialize)]
struct LevelRow {
    level: usize,
    energy: f64,
}

pub fn spectrum(cfg: &ExperimentConfig, out: &mut Outcome) -> Result<(), CliError> {
    let mut summaries = Vec::new();
    for &n in &cfg.lattice.sites {
        for &cutoff in &cfg.lattice.cutoffs {
            let s = spec(cfg, n, cutoff);
            let name = format!("spectrum_N{n}_cut{cutoff}.csv");
            let summary = if s.boundary == Boundary::Periodic {
                let sys = PacketSystem::new(s, &cfg.packet.interpolator, cfg.packet.threshold)?;
                let mut bytes = Vec::new();
                sys.table.write_csv(&mut bytes)?;
                out.raw(&name, bytes);
                let e0 = sys.vacuum_energy;
                let gap = sys.table.sectors.iter().flat_map(|x| x.energies.iter()).filter(|&&e| e > e0 + 1e-9).fold(f64::INFINITY, |a, &e| a.min(e - e0));
                SpectrumSummary {
                    sites: n,
                    cutoff,
                    dim: sys.table.dim,
                    vacuum_energy: e0,
                    gap,
                    branch: sys.table.branch.clone(),
                    hermiticity_defect: sys.hamiltonian.hermiticity_defect(),
                    orthonormality_defect: sys.table.orthonormality_defect(),
                    tolerance: RHO_TOL,
                }
            } else {
                let h = build_hamiltonian_1d(s, Sector::ZeroCharge)?;
                let values = eigh(&h.dense())?.values;
                out.csv(&name, &values.iter().enumerate().map(|(level, &energy)| LevelRow { level, energy }).collect::<Vec<_>>());
                let gap = values.iter().find(|&&e| e > values[0] + 1e-9).map_or(f64::INFINITY, |e| e - values[0]);
                SpectrumSummary { sites: n, cutoff, dim: h.dim(), vacuum_energy: values[0], gap, branch: Vec::new(), hermiticity_defect: h.hermiticity_defect(), orthonormality_defect: 0.0, tolerance: RHO_TOL }
            };
            out.check(summary.hermiticity_defect <= EXACT_TOL, format!("N={n} cutoff {cutoff}: Hamiltonian not Hermitian ({:e})", summary.hermiticity_defect));
            out.check(summary.orthonormality_defect <= RHO_TOL, format!("N={n} cutoff {cutoff}: eigenvectors not orthonormal ({:e})", summary.orthonormality_defect));
            summaries.push(summary);
        }
    }
    out.tolerance("hermiticity", EXACT_TOL);
    out.tolerance("orthonormality", RHO_TOL);
    out.json("spectrum.json", &json!({ "schema": "hrwave/spectrum/1", "theory": cfg.lattice.theory, "rows": summaries }));
    Ok(())
}

fn check_report(out: &mut Outcome, tag: &str, r: &SuccessReport) {
    out.check(r.rho_spread <= RHO_TOL, format!("{tag}: ρ values differ by {:e}", r.rho_spread));
    if let Some(d) = r.state_defect {
        out.check(d <= RHO_TOL, format!("{tag}: post-selected state differs by {d:e}"));
    }
    let f = r.fidelity;
    out.check((f.vacuum + f.one_particle + f.leakage - 1.0).abs() <= RHO_TOL, format!("{tag}: fidelity weights do not sum to one"));
    out.check(r.rho > 0.0 && r.rho <= 1.0 + RHO_TOL, format!("{tag}: ρ = {} outside (0, 1]", r.rho));
}

/// Report with the ancilla run and the state check when the register fits.
fn full_report(cfg: &ExperimentConfig, sys: &PacketSystem, p: &PacketParams, register: Option<&hrwave::haag_ruelle::RegisterSystem>) -> Result<SuccessReport, CliError> {
    let prof = sys.profile(p)?;
    let plan = sys.plan(&prof);
    let asm = sys.assemble(&plan)?;
    let fid = sys.fidelity(&asm)?;
    Ok(match register {
        Some(reg) => {
            let sim = lcu_simulate(&sys.setup(reg, &plan), cfg.packet.register_cap + 64)?;
            let target = sys.hamiltonian.embed(&asm.state)?.into_amplitudes();
            SuccessReport::new(&plan, Some(&prof), &asm, fid, Some(&sim)).with_state_check(&sim, &target)
        }
        None => SuccessReport::new(&plan, Some(&prof), &asm, fid, None),
    })
}

#[derive(Serialize)]
struct SampleRow {
    time: f64,
    site: usize,
    re: f64,
    im: f64,
}

pub fn wavepacket(cfg: &ExperimentConfig, out: &mut Outcome) -> Result<(), CliError> {
    let sys = system(cfg)?;
    let p = params(cfg, &sys);
    let width = register_width(first_spec(cfg))?;
    let register = if width <= cfg.packet.register_cap { Some(sys.register()?) } else { None };
    let rep = full_report(cfg, &sys, &p, register.as_ref())?;
    check_report(out, "packet", &rep);
    let prof = sys.profile(&p)?;
    let rows: Vec<SampleRow> = prof.times.iter().zip(&prof.samples).flat_map(|(&t, row)| prof.sites.iter().zip(row).map(move |(&site, z)| SampleRow { time: t, site, re: z.re, im: z.im })).collect();
    out.tolerance("rho", RHO_TOL);
    out.json("success_report.json", &rep);
    out.csv("packet_samples.csv", &rows);
    Ok(())
}

#[derive(Serialize)]
struct VerifyRow {
    config: usize,
    delta_p: f64,
    duration: f64,
    time_samples: usize,
    rho: f64,
    rho_formula: Option<f64>,
    rho_simulated: Option<f64>,
    rho_spread: f64,
    state_defect: Option<f64>,
    one_particle: f64,
    leakage: f64,
    tolerance: f64,
}

pub fn lcu_verify(cfg: &ExperimentConfig, out: &mut Outcome) -> Result<(), CliError> {
    let sys = system(cfg)?;
    let width = register_width(first_spec(cfg))?;
    if width > cfg.packet.register_cap {
        return Err(CliError::Config(format!("register of {width} qubits exceeds packet.register_cap = {}", cfg.packet.register_cap)));
    }
    if cfg.study.sweep.is_empty() {
        return Err(CliError::Config("lcu-verify needs at least one study.sweep entry".into()));
    }
    let reg = sys.register()?;
    let base = params(cfg, &sys);
    let configs: Vec<PacketParams> = cfg.study.sweep.iter().map(|&[delta_p, duration]| PacketParams { delta_p, duration, ..base }).collect();
    let mut reports = Vec::new();
    let mut rows = Vec::new();
    for (i, p) in configs.iter().enumerate() {
        let r = full_report(cfg, &sys, p, Some(&reg))?;
        check_report(out, &format!("config {i}"), &r);
        rows.push(VerifyRow {
            config: i,
            delta_p: p.delta_p,
            duration: p.duration,
            time_samples: r.time_samples.unwrap_or(0),
            rho: r.rho,
            rho_formula: r.rho_formula,
            rho_simulated: r.rho_simulated,
            rho_spread: r.rho_spread,
            state_defect: r.state_defect,
            one_particle: r.fidelity.one_particle,
            leakage: r.fidelity.leakage,
            tolerance: RHO_TOL,
        });
        reports.push(r);
    }
    // two copies of the register stand in for two far-apart packets
    let pa = sys.plan(&sys.profile(&configs[0])?);
    let pb = sys.plan(&sys.profile(configs.get(1).unwrap_or(&configs[0]))?);
    let cap = 2 * width + 64;
    let ra = lcu_simulate(&sys.setup(&reg, &pa), cap)?.probability;
    let rb = lcu_simulate(&sys.setup(&reg, &pb), cap)?.probability;
    let joint = lcu_simulate_product(&sys.setup(&reg, &pa), &sys.setup(&reg, &pb), cap)?.probability;
    let defect = (joint - ra * rb).abs();
    out.check(defect <= PRODUCT_TOL, format!("joint probability {joint} vs product {}", ra * rb));
    out.tolerance("rho", RHO_TOL);
    out.tolerance("product", PRODUCT_TOL);
    out.json(
        "lcu_verify.json",
        &json!({
            "schema": "hrwave/lcu-verify/1",
            "reports": reports,
            "product": { "rho_a": ra, "rho_b": rb, "joint": joint, "defect": defect, "tolerance": PRODUCT_TOL },
        }),
    );
    out.csv("lcu_verify.csv", &rows);
    Ok(())
}

#[derive(Serialize)]
struct JwRow {
    i: usize,
    j: usize,
    anticommutator_defect: f64,
    tolerance: f64,
}

pub fn encode_check(cfg: &ExperimentConfig, out: &mut Outcome) -> Result<(), CliError> {
    match cfg.encoding.encoder {
        Encoder::Gse => {
            let graphs: Vec<GseGraph> = match &cfg.paths.graph {
                Some(path) => {
                    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
                    let file: GseGraphFile = serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
                    vec![GseGraph::from_file(&file).map_err(|e| CliError::Config(e.to_string()))?]
                }
                None => {
                    let mut rng = ChaCha8Rng::seed_from_u64(cfg.run.seed);
                    (0..cfg.encoding.graphs).map(|_| random_even_graph(&mut rng, cfg.encoding.max_vertices, cfg.encoding.max_edges)).collect::<Result<_, _>>()?
                }
            };
            let checks: Vec<GseCheck> = graphs.iter().map(|g| check_gse(g, RHO_TOL)).collect::<Result<_, _>>()?;
            for (i, c) in checks.iter().enumerate() {
                out.check(c.passed, format!("graph {i} fails the encoding checks: {c:?}"));
            }
            out.tolerance("operator identities", RHO_TOL);
            let listing: Vec<Value> = graphs.iter().zip(&checks).map(|(g, c)| json!({ "graph": g.to_file(), "check": c })).collect();
            out.json("encode_check.json", &json!({ "schema": "hrwave/encode-check/1", "encoder": "gse", "passed": checks.iter().all(|c| c.passed), "graphs": listing }));
            out.csv("encode_check.csv", &checks);
        }
        Encoder::Jw => {
            let layout = JwLayout::new(cfg.lattice.theory, cfg.lattice.sites[0]);
            let width = layout.modes();
            let lower: Vec<OperatorSum<f64>> = (0..cfg.lattice.sites[0])
                .flat_map(|x| (0..layout.colors()).map(move |c| (x, c)))
                .map(|(x, c)| jw_lower(&layout, x, c, width))
                .collect::<Result<_, _>>()?;
            let id = OperatorSum::identity(width)?;
            let mut rows = Vec::new();
            for (i, a) in lower.iter().enumerate() {
                for (j, b) in lower.iter().enumerate() {
                    let want = if i == j { id.clone() } else { OperatorSum::zero(width) };
                    let d1 = a.anticommutator(&b.adjoint())?.sub(&want)?.one_norm();
                    let d2 = a.anticommutator(b)?.one_norm();
                    rows.push(JwRow { i, j, anticommutator_defect: d1.max(d2), tolerance: RHO_TOL });
                }
            }
            let worst = rows.iter().map(|r| r.anticommutator_defect).fold(0.0, f64::max);
            out.check(worst <= RHO_TOL, format!("Jordan-Wigner anticommutators off by {worst:e}"));
            out.tolerance("operator identities", RHO_TOL);
            out.json("encode_check.json", &json!({ "schema": "hrwave/encode-check/1", "encoder": "jw", "modes": width, "max_defect": worst, "passed": worst <= RHO_TOL, "tolerance": RHO_TOL }));
            out.csv("encode_check.csv", &rows);
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct CRow {
    formulation: String,
    label: String,
    c: f64,
    c_reduced: f64,
    mass_dimension: f64,
    terms: usize,
    convention: String,
}

impl CRow {
    fn of(formulation: &str, i: &Interpolator) -> Self {
        Self { formulation: formulation.into(), label: i.label.clone(), c: i.c, c_reduced: i.c_reduced, mass_dimension: i.mass_dimension, terms: i.terms, convention: i.convention.clone() }
    }
}

pub fn interpolator_table(cfg: &ExperimentConfig, out: &mut Outcome) -> Result<(), CliError> {
    let table = match &cfg.paths.su3_table {
        Some(path) => DiagonalTable::from_json(&std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?).map_err(|e| CliError::Config(e.to_string()))?,
        None => DiagonalTable::random(1, cfg.run.seed),
    };
    let mut rows = Vec::new();
    for theory in [Theory::U1, Theory::SU2, Theory::SU3] {
        let layout = Layout1D::new(theory, 2, 1, Boundary::Open, cfg.lattice.truncation, Some(&table))?;
        for op in interpolators_1d(&layout, 0, cfg.lattice.spacing)? {
            rows.push(CRow::of("staggered-1d", &op));
        }
    }
    let golden: [(&str, f64); 11] =
        [("U1.O1", 2.0), ("U1.O2", 2.0), ("U1.O3", 2.0), ("SU2.O1", 4.0), ("SU2.O2", 16.0), ("SU2.O3", 16.0), ("SU2.O4", 2.0), ("SU3.O1", 6.0), ("SU3.O4", 6.0), ("SU3.O2", 130.0), ("SU3.O3", 130.0)];
    let mut checks = Vec::new();
    for (label, want) in golden {
        let got = rows.iter().find(|r| r.label == label).map_or(f64::NAN, |r| r.c_reduced);
        let approximate = label == "SU3.O2" || label == "SU3.O3";
        let tolerance = if approximate { 0.25 } else { EXACT_TOL };
        let ok = if approximate { (got / want - 1.0).abs() <= tolerance } else { (got - want).abs() <= tolerance };
        out.check(ok, format!("{label}: C a^d = {got}, expected {want}"));
        checks.push(json!({ "label": label, "c_reduced": got, "expected": want, "relative": approximate, "tolerance": tolerance, "passed": ok }));
    }
    let values: BTreeMap<&str, f64> = rows.iter().map(|r| (r.label.as_str(), r.c)).collect();
    let reduced: BTreeMap<&str, f64> = rows.iter().map(|r| (r.label.as_str(), r.c_reduced)).collect();
    out.tolerance("exact C", EXACT_TOL);
    out.tolerance("SU3 O2/O3 relative", 0.25);
    out.json("interpolator_table.json", &json!({ "schema": "hrwave/interpolator-table/1", "spacing": cfg.lattice.spacing, "values": values, "c_reduced": reduced, "checks": checks }));
    out.csv("interpolator_table.csv", &rows);
    Ok(())
}

pub fn qcd_cvalues(cfg: &ExperimentConfig, out: &mut Outcome) -> Result<(), CliError> {
    let a = cfg.lattice.spacing;
    let k = Counting::default();
    let id = StaggeredIdentification::variant1();
    let mut rows = Vec::new();
    let mut get = |formulation: &str, f: Formulation| -> Result<[f64; 3], CliError> {
        let pip = qcd_pion(PionCharge::Plus, [0, 0, 0], f, &k, a)?;
        let pim = qcd_pion(PionCharge::Minus, [0, 0, 0], f, &k, a)?;
        let pi0 = qcd_pion(PionCharge::Zero, [0, 0, 0], f, &k, a)?;
        let p = qcd_nucleon(Nucleon::Proton, 0, [0, 0, 0], f, &k, a)?;
        let n = qcd_nucleon(Nucleon::Neutron, 0, [0, 0, 0], f, &k, a)?;
        for i in [&pip, &pim, &pi0, &p, &n] {
            rows.push(CRow::of(formulation, i));
        }
        Ok([pip.c_reduced, pi0.c_reduced, p.c_reduced])
    };
    let [wpi, wpi0, wp] = get("wilson", Formulation::Wilson)?;
    let [spi, spi0, sp] = get("staggered", Formulation::Staggered(&id))?;
    let checks = [
        ("wilson pion", wpi, 12.0, EXACT_TOL, (wpi - 12.0).abs() <= EXACT_TOL),
        ("wilson proton", wp, 24.0, EXACT_TOL, (wp - 24.0).abs() <= EXACT_TOL),
        ("wilson neutral/charged", wpi0 / wpi, SQRT_2, EXACT_TOL, (wpi0 / wpi - SQRT_2).abs() <= EXACT_TOL),
        ("staggered neutral/charged", spi0 / spi, SQRT_2, EXACT_TOL, (spi0 / spi - SQRT_2).abs() <= EXACT_TOL),
        ("staggered pion", spi, 432.0, 2.0, spi / 432.0 <= 2.0 && 432.0 / spi <= 2.0),
        ("staggered proton", sp, 11500.0, 2.0, sp / 11500.0 <= 2.0 && 11500.0 / sp <= 2.0),
    ];
    let checks: Vec<Value> = checks
        .iter()
        .map(|&(name, got, want, tol, ok)| {
            out.check(ok, format!("{name}: {got} vs {want}"));
            json!({ "quantity": name, "value": got, "expected": want, "tolerance": tol, "factor_band": tol == 2.0, "passed": ok })
        })
        .collect();
    out.tolerance("exact C", EXACT_TOL);
    out.tolerance("staggered factor", 2.0);
    out.json("qcd_cvalues.json", &json!({ "schema": "hrwave/qcd-cvalues/1", "spacing": a, "counting": k, "convention": k.describe(), "checks": checks, "rows": rows }));
    out.csv("qcd_cvalues.csv", &rows);
    Ok(())
}

#[derive(Serialize)]
struct SweepRow {
    delta_p: f64,
    duration: f64,
    time_samples: usize,
    rho: f64,
    vacuum: f64,
    one_particle: f64,
    leakage: f64,
}

pub fn scaling(cfg: &ExperimentConfig, out: &mut Outcome) -> Result<(), CliError> {
    let sys = system(cfg)?;
    let v = Validity::of(&sys);
    // with no explicit deltas an empty window leaves only the leakage sweep
    let deltas: Vec<f64> = if !cfg.study.deltas.is_empty() {
        cfg.study.deltas.clone()
    } else if v.max_delta_p < v.min_delta_p * (1.0 - 1e-12) {
        Vec::new()
    } else if v.max_delta_p / v.min_delta_p < 1.0 + 1e-9 {
        vec![v.max_delta_p]
    } else {
        (0..5).map(|i| v.min_delta_p * (v.max_delta_p / v.min_delta_p).powf(i as f64 / 4.0)).collect()
    };
    if cfg.study.k_centers.is_empty() {
        return Err(CliError::Config("study.k_centers is empty".into()));
    }
    let base = params(cfg, &sys);
    let table = if deltas.is_empty() { ScalingTable { rows: Vec::new(), delta_fit: None, energy_fit: None, validity: v } } else { scaling_study(&sys, &base, &deltas, &cfg.study.k_centers)? };
    let sweep = leakage_sweep(&sys, &base, &cfg.study.sweep.iter().map(|&[d, t]| (d, t)).collect::<Vec<_>>())?;
    let sweep_rows: Vec<SweepRow> = sweep
        .iter()
        .map(|s| SweepRow { delta_p: s.delta_p, duration: s.duration, time_samples: s.time_samples, rho: s.rho, vacuum: s.fidelity.vacuum, one_particle: s.fidelity.one_particle, leakage: s.fidelity.leakage })
        .collect();
    for r in &table.rows {
        out.check(r.rho > 0.0 && r.rho <= 1.0 + RHO_TOL, format!("ρ = {} at δ_p = {}", r.rho, r.delta_p));
    }
    for s in &sweep_rows {
        out.check((s.vacuum + s.one_particle + s.leakage - 1.0).abs() <= RHO_TOL, format!("fidelity weights at δ_p = {} do not sum to one", s.delta_p));
    }
    let in_band = table.delta_fit.map(|f| (0.5..=1.5).contains(&f.slope));
    out.tolerance("fidelity sum", RHO_TOL);
    out.tolerance("slope band half-width", 0.5);
    out.json(
        "scaling.json",
        &json!({
            "schema": "hrwave/scaling-study/1",
            "validity": table.validity,
            "delta_fit": table.delta_fit,
            "energy_fit": table.energy_fit,
            "slope_within_band": in_band,
            "band": [0.5, 1.5],
            "sweep": sweep,
        }),
    );
    if table.rows.is_empty() {
        out.raw("scaling.csv", b"delta_p,k_center,mean_energy,rho,one_particle\n".to_vec());
    } else {
        out.csv("scaling.csv", &table.rows);
    }
    out.csv("sweep.csv", &sweep_rows);
    Ok(())
}

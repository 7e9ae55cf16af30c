use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;

use hrwave::encodings::Theory;
use hrwave::haag_ruelle::*;
use hrwave::interpolators::{interpolators_1d, Layout1D};
use hrwave::lattice::*;
use hrwave::pauli::{LcuDecomposition, MaterializeCaps, OperatorSum, PauliString, PauliTerm, SparseMatrix};
use hrwave::Complex64;
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn u1(sites: usize, boundary: Boundary) -> LatticeSpec1D {
    LatticeSpec1D { theory: Theory::U1, sites, spacing: 1.0, mass: 1.0, coupling: 1.0, cutoff: 1, boundary, truncation: Truncation::Cyclic }
}

fn c(re: f64) -> Complex64 {
    Complex::new(re, 0.0)
}

fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn random_sum(rng: &mut ChaCha8Rng, width: usize, terms: usize, hermitian: bool) -> OperatorSum<f64> {
    let t = (0..terms)
        .map(|_| {
            let s = PauliString::from_masks(width, rng.gen_range(0..1u64 << width), rng.gen_range(0..1u64 << width)).unwrap();
            let z = if hermitian { c(rng.gen_range(-1.0..1.0)) } else { Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) };
            PauliTerm::new(z, s)
        })
        .collect();
    let op = OperatorSum::from_terms(width, t).unwrap();
    if hermitian {
        op.add(&op.adjoint()).unwrap().scale_real(0.5)
    } else {
        op
    }
}

fn random_state(rng: &mut ChaCha8Rng, dim: usize) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..dim).map(|_| Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / n).collect()
}

fn caps() -> MaterializeCaps {
    MaterializeCaps::default()
}

#[test]
fn time_samples_scale_with_duration_and_accuracy() {
    let s = choose_time_samples(4.0, 0.25, 9.0, 1.0).unwrap();
    assert_eq!(s.n, 24);
    assert!((s.dt - 4.0 / 24.0).abs() < 1e-15);
    assert_eq!(choose_time_samples(4.0, 0.25 / 4.0, 9.0, 1.0).unwrap().n, 48);
    assert_eq!(choose_time_samples(8.0, 0.25, 9.0, 1.0).unwrap().n, 48);
    assert_eq!(choose_time_samples(4.0, 0.25, 9.0, 2.0).unwrap().n, 48);
    assert_eq!(choose_time_samples(4.0, 0.25, 0.0, 1.0).unwrap().n, 1);
    let mut last = 0;
    for i in 1..40 {
        let n = choose_time_samples(0.37 * i as f64, 0.01, 2.3, 1.0).unwrap().n;
        assert!(n >= last);
        last = n;
    }
    for bad in [(0.0, 0.1, 1.0), (1.0, 0.0, 1.0), (1.0, 0.1, -1.0), (f64::NAN, 0.1, 1.0)] {
        assert!(choose_time_samples(bad.0, bad.1, bad.2, 1.0).is_err());
    }
}

#[test]
fn commutator_norm_ignores_lattice_size() {
    let mut norms = Vec::new();
    for n in [8, 10, 12] {
        let model = Model1D::new(u1(n, Boundary::Open)).unwrap();
        let layout = Layout1D::from_model(&model).unwrap();
        let h = model.operator_sum().unwrap();
        let ops = interpolators_1d(&layout, 4, 1.0).unwrap();
        let o = ops[0].lcu().unwrap().to_operator_sum().unwrap();
        norms.push(commutator_norm(&h, &o).unwrap());
    }
    assert!(norms[0] > 0.0);
    for w in norms.windows(2) {
        assert!((w[0] - w[1]).abs() < 1e-10, "{norms:?}");
    }
}

#[test]
fn commutator_norm_bounds_the_operator_norm() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let h = random_sum(&mut rng, 4, 6, true);
    let o = random_sum(&mut rng, 4, 3, false);
    let ho = h.commutator(&o).unwrap();
    let m = h.commutator(&ho).unwrap().to_dense(caps()).unwrap();
    let spectral = m.singular_values().max();
    assert!(spectral <= commutator_norm(&h, &o).unwrap() + 1e-12);
}

fn n4(label: &str) -> PacketSystem {
    PacketSystem::new(u1(4, Boundary::Periodic), label, 0.5).unwrap()
}

#[test]
fn profile_is_even_about_its_centre_at_rest() {
    let sys = PacketSystem::new(u1(8, Boundary::Periodic), "O1", 0.5).unwrap();
    let p = PacketParams { x_center: 2, ..sys.params(0.0, 0.6, 3.0, 0.1) };
    let prof = sys.profile(&p).unwrap();
    let n = sys.spec().sites;
    for row in &prof.samples {
        for (j, &x) in prof.sites.iter().enumerate() {
            let mirror = (2 * p.x_center + n - x) % n;
            let jm = prof.sites.iter().position(|&s| s == mirror).unwrap();
            assert!((row[j] - row[jm]).norm() < 1e-12);
        }
    }
}

#[test]
fn profile_fourier_transform_returns_the_momentum_weights() {
    let sys = PacketSystem::new(u1(8, Boundary::Periodic), "O1", 0.5).unwrap();
    let p = PacketParams { x_center: 4, ..sys.params(FRAC_PI_2 / 2.0, 0.5, 2.0, 0.1) };
    let prof = sys.profile(&p).unwrap();
    let cells = prof.sites.len() as f64;
    for (i, &t) in prof.times.iter().enumerate() {
        let g = (-t * t / (2.0 * (p.duration / 4.0).powi(2))).exp();
        for m in &prof.momenta {
            let f: Complex64 = prof.sites.iter().zip(&prof.samples[i]).map(|(&x, &z)| z * Complex::from_polar(1.0, -m.k * (x as f64 - p.x_center as f64))).sum();
            let expected = Complex::from_polar(g * cells * m.weight, -m.energy * t);
            assert!((f - expected).norm() < 1e-10);
        }
    }
    let peak = prof.momenta.iter().max_by(|a, b| a.weight.total_cmp(&b.weight)).unwrap();
    assert!((peak.k - FRAC_PI_2 / 2.0).abs() < 1e-12);
}

#[test]
fn profile_single_sample_and_errors() {
    let sys = n4("O1");
    let p = PacketParams { comm_norm: 0.0, ..sys.params(0.0, 1.0, 2.0, 0.1) };
    let prof = sys.profile(&p).unwrap();
    assert_eq!(prof.sampling.n, 1);
    assert_eq!(prof.times, vec![0.0]);
    assert!((prof.sampling.dt - 2.0).abs() < 1e-15);
    assert!(matches!(sys.profile(&PacketParams { x_center: 1, ..p }), Err(HaagRuelleError::InvalidInput(_))));
    assert!(sys.profile(&PacketParams { delta_p: 0.0, ..p }).is_err());
    let mut bare = sys.table.clone();
    bare.branch.clear();
    assert!(matches!(design_profile(&bare, &p), Err(HaagRuelleError::MissingBranch { .. })));
    assert!(matches!(design_profile(&sys.table, &PacketParams { min_gap: 1e3, ..p }), Err(HaagRuelleError::SupportSpill { .. })));
}

struct Toy {
    evolution: DenseEvolution,
    ops: BTreeMap<usize, SparseMatrix<f64>>,
    lcus: BTreeMap<usize, LcuDecomposition<f64>>,
    initial: Vec<Complex64>,
}

fn toy(seed: u64, width: usize) -> Toy {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h = random_sum(&mut rng, width, 10, true);
    let evolution = DenseEvolution::new(&h.to_dense(caps()).unwrap()).unwrap();
    let mut ops = BTreeMap::new();
    let mut lcus = BTreeMap::new();
    for site in [0, 2] {
        let o = random_sum(&mut rng, width, 3, false);
        ops.insert(site, o.to_sparse(caps()).unwrap());
        lcus.insert(site, LcuDecomposition::from_operator_sum(&o));
    }
    Toy { evolution, ops, lcus, initial: random_state(&mut rng, 1 << width) }
}

fn random_plan(seed: u64, terms: usize) -> CreationPlan {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let t = (0..terms)
        .map(|_| PlanTerm { time: rng.gen_range(-2.0..2.0), site: 2 * rng.gen_range(0..2), coefficient: Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) })
        .collect();
    CreationPlan::new("toy", 1.0, t)
}

#[test]
fn assembly_of_trivial_plans() {
    let t = toy(1, 4);
    let mut ops = BTreeMap::new();
    ops.insert(0, SparseMatrix::identity(16));
    let one = CreationPlan::new("u", 1.0, vec![PlanTerm { time: 0.7, site: 0, coefficient: c(1.0) }]);
    let a = assemble(&one, &ops, &t.evolution, &t.initial).unwrap();
    assert!((a.rho - 1.0).abs() < 1e-12);
    assert!(max_diff(&a.state, &t.initial) < 1e-12);
    let pair = CreationPlan::new("u", 1.0, vec![PlanTerm { time: 0.7, site: 0, coefficient: c(1.0) }, PlanTerm { time: 0.7, site: 0, coefficient: c(-1.0) }]);
    assert!(assemble(&pair, &ops, &t.evolution, &t.initial).unwrap().rho < 1e-24);
    let empty = CreationPlan::new("u", 1.0, vec![]);
    assert!(assemble(&empty, &ops, &t.evolution, &t.initial).is_err());
}

#[test]
fn assembly_matches_a_dense_oracle() {
    let t = toy(2, 4);
    let plan = random_plan(5, 7);
    let a = assemble(&plan, &t.ops, &t.evolution, &t.initial).unwrap();
    let e = &t.evolution.eigen;
    let u = |time: f64| {
        let d = nalgebra::DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(16, e.values.iter().map(|&x| Complex::from_polar(1.0, -x * time))));
        &e.vectors * d * e.vectors.adjoint()
    };
    let mut m = nalgebra::DMatrix::<Complex64>::zeros(16, 16);
    for term in &plan.terms {
        m += (u(-term.time) * t.ops[&term.site].to_dense() * u(term.time)) * term.coefficient;
    }
    let oracle: Vec<Complex64> = (m * nalgebra::DVector::from_column_slice(&t.initial)).iter().copied().collect();
    assert!(max_diff(&a.state, &oracle) < 1e-12);
}

#[test]
fn assembly_ignores_term_order_and_normalization_of_psi() {
    let t = toy(3, 4);
    let plan = random_plan(6, 9);
    let a = assemble(&plan, &t.ops, &t.evolution, &t.initial).unwrap();
    let mut rev = plan.terms.clone();
    rev.reverse();
    let rev = CreationPlan::new("toy", 1.0, rev);
    assert!((rev.alpha - plan.alpha).abs() < 1e-12);
    assert!(max_diff(&assemble(&rev, &t.ops, &t.evolution, &t.initial).unwrap().state, &a.state) < 1e-12);
    let doubled = assemble(&plan.scaled(Complex::new(0.0, 2.0)), &t.ops, &t.evolution, &t.initial).unwrap();
    assert!((doubled.rho - a.rho).abs() < 1e-12 * a.rho.max(1.0));
}

#[test]
fn ancilla_run_matches_assembly() {
    let t = toy(4, 6);
    let plan = random_plan(7, 3);
    let lcu_alpha = t.lcus[&0].terms().iter().map(|q| q.coefficient.norm()).sum::<f64>();
    assert!(lcu_alpha > 0.0);
    let a = assemble(&plan, &t.ops, &t.evolution, &t.initial).unwrap();
    let setup = LcuSetup { plan: &plan, ops: &t.lcus, evolution: &t.evolution, initial: &t.initial };
    let sim = lcu_simulate(&setup, 20).unwrap();
    let scaled: Vec<Complex64> = sim.state.iter().map(|z| z * sim.alpha).collect();
    assert!(max_diff(&scaled, &a.state) < 1e-10);
    assert!((sim.probability - (a.norm / sim.alpha).powi(2)).abs() < 1e-10);
    assert!(sim.unitarity_defect < 1e-12);
    assert_eq!(sim.system_qubits, 6);
    assert!(matches!(lcu_simulate(&setup, 6), Err(HaagRuelleError::WidthOverflow { .. })));
}

#[test]
fn postselection_of_a_single_branch_is_the_branch() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let v = random_state(&mut rng, 8);
    let p = ancilla_postselect(&[2.5], 8, |_| v.clone()).unwrap();
    assert!(max_diff(&p.block, &v) < 1e-15);
    assert_eq!(p.ancilla_qubits, 0);
    assert!(ancilla_postselect(&[0.0, 0.0], 8, |_| v.clone()).is_err());
    assert!(ancilla_postselect(&[1.0, -1.0], 8, |_| v.clone()).is_err());
}

#[test]
fn spectral_and_direct_assembly_agree() {
    let sys = n4("O2");
    for (k, d, t) in [(0.0, 1.0, 3.0), (FRAC_PI_2, 0.7, 2.0)] {
        let prof = sys.profile(&sys.params(k, d, t, 0.05)).unwrap();
        let plan = sys.plan(&prof);
        let a = sys.assemble(&plan).unwrap();
        let b = sys.assemble_direct(&plan).unwrap();
        assert!(max_diff(&a.state, &b.state) < 1e-12);
        assert!((a.rho - b.rho).abs() < 1e-12);
    }
    let mut shifted = sys.vacuum.clone();
    shifted[0] += c(0.1);
    let prof = sys.profile(&sys.params(0.0, 1.0, 1.0, 0.1)).unwrap();
    assert!(assemble_spectral(&sys.plan(&prof), &sys.ops, &sys.table, &shifted).is_err());
}

#[test]
fn success_probability_is_invariant_under_time_shifts() {
    let sys = n4("O1");
    let prof = sys.profile(&sys.params(0.0, 1.0, 3.0, 0.05)).unwrap();
    let plan = sys.plan(&prof);
    let shifted = CreationPlan::new(plan.label.clone(), plan.c, plan.terms.iter().map(|t| PlanTerm { time: t.time + 1.3, ..*t }).collect());
    let a = sys.assemble(&plan).unwrap();
    let b = sys.assemble(&shifted).unwrap();
    assert!((a.rho - b.rho).abs() < 1e-12);
    assert!((sys.fidelity(&a).unwrap().one_particle - sys.fidelity(&b).unwrap().one_particle).abs() < 1e-10);
}

#[test]
fn report_agrees_three_ways() {
    let sys = n4("O1");
    let reg = sys.register().unwrap();
    assert_eq!(reg.width, 8);
    let prof = sys.profile(&sys.params(FRAC_PI_2, 0.5, 1.0, 0.1)).unwrap();
    let (rep, asm) = sys.report(&prof, Some(&reg), 40).unwrap();
    assert!(rep.rho_spread < 1e-10, "{rep:?}");
    assert_eq!(rep.schema, SUCCESS_REPORT_SCHEMA);
    assert!((rep.repetitions * rep.rho - 1.0).abs() < 1e-12);
    let plan = sys.plan(&prof);
    let sim = lcu_simulate(&sys.setup(&reg, &plan), 40).unwrap();
    let target = sys.hamiltonian.embed(&asm.state).unwrap().into_amplitudes();
    let checked = rep.clone().with_state_check(&sim, &target);
    // the expanded LCU has the same 1-norm as C Σ|ψ|
    assert!((sim.alpha - plan.alpha).abs() < 1e-10 * plan.alpha);
    assert!(checked.state_defect.unwrap() < 1e-12);
    let json = serde_json::to_value(&rep).unwrap();
    assert_eq!(json["schema"], SUCCESS_REPORT_SCHEMA);
}

#[test]
fn decoupled_packets_multiply() {
    let sys = n4("O1");
    let reg = sys.register().unwrap();
    let pa = sys.plan(&sys.profile(&sys.params(0.0, 1.0, 0.6, 0.2)).unwrap());
    let pb = sys.plan(&sys.profile(&sys.params(FRAC_PI_2, 0.5, 0.6, 0.2)).unwrap());
    let ra = lcu_simulate(&sys.setup(&reg, &pa), 40).unwrap();
    let rb = lcu_simulate(&sys.setup(&reg, &pb), 40).unwrap();
    let joint = lcu_simulate_product(&sys.setup(&reg, &pa), &sys.setup(&reg, &pb), 60).unwrap();
    assert!((joint.probability - ra.probability * rb.probability).abs() < 1e-8);
    let (plain, amplified) = pair_repetitions(ra.probability, rb.probability);
    assert!((plain - amplified * amplified).abs() < 1e-9 * plain);
}

#[test]
fn fidelity_of_eigenstates() {
    let sys = n4("O1");
    let f = one_particle_fidelity(&sys.vacuum, &sys.table).unwrap();
    assert!((f.vacuum - 1.0).abs() < 1e-12 && f.one_particle.abs() < 1e-12 && f.leakage.abs() < 1e-12);
    let b = &sys.table.branch[0];
    let s = sys.table.sector(b.m).unwrap();
    let v = s.eigenvector(b.level, sys.table.dim);
    let f = one_particle_fidelity(&v, &sys.table).unwrap();
    assert!((f.one_particle - 1.0).abs() < 1e-12 && f.leakage.abs() < 1e-12);
    let half: Vec<Complex64> = v.iter().map(|z| z * 0.5).collect();
    assert!(matches!(one_particle_fidelity(&half, &sys.table), Err(HaagRuelleError::NotNormalized(_))));
}

#[test]
fn validity_window_and_fits() {
    let sys = PacketSystem::new(u1(8, Boundary::Periodic), "O1", 0.5).unwrap();
    let v = Validity::of(&sys);
    assert!(v.min_delta_p <= v.max_delta_p);
    let base = sys.params(0.0, 1.0, 2.0, 0.1);
    assert!(matches!(scaling_study(&sys, &base, &[v.min_delta_p / 2.0], &[0.0]), Err(HaagRuelleError::OutsideValidity(_))));
    assert!(matches!(scaling_study(&sys, &base, &[2.0 * v.max_delta_p], &[0.0]), Err(HaagRuelleError::OutsideValidity(_))));
    let tab = scaling_study(&sys, &base, &[v.max_delta_p], &[0.0, v.grid_spacing]).unwrap();
    assert_eq!(tab.rows.len(), 2);
    assert!(tab.delta_fit.is_none());
    let xs = [1.0, 2.0, 4.0, 8.0];
    let ys: Vec<f64> = xs.iter().map(|x: &f64| 3.0 * x.powf(1.5)).collect();
    let f = fit_loglog(&xs, &ys, 1.0).unwrap();
    assert!((f.slope - 1.5).abs() < 1e-12 && (f.intercept - 3f64.ln()).abs() < 1e-12);
    assert!(f.stderr.unwrap() < 1e-10);
    assert!(fit_loglog(&[1.0, 1.0], &[1.0, 2.0], 1.0).is_err());
    assert!(fit_loglog(&[1.0], &[1.0], 1.0).is_err());
}

#[test]
fn leakage_sweep_reports_each_configuration() {
    let sys = n4("O1");
    let base = sys.params(0.0, 1.0, 1.0, 0.1);
    let pts = leakage_sweep(&sys, &base, &[(1.0, 1.0), (0.5, 2.0)]).unwrap();
    assert_eq!(pts.len(), 2);
    for p in &pts {
        let s = p.fidelity.vacuum + p.fidelity.one_particle + p.fidelity.leakage;
        assert!((s - 1.0).abs() < 1e-12);
        assert!(p.rho > 0.0 && p.rho <= 1.0);
    }
}

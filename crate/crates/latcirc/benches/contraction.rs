//! Contraction benchmarks: the brute-force configuration sum with the
//! parallel and sequential backends side by side, plus gate application and
//! estimator sampling.
//!
//! The parallel/sequential comparison drives the same chunked kernel through
//! `complex_sum_indexed_par` and `complex_sum_indexed_seq`; gate application
//! is additionally run inside a single-thread rayon pool to show the
//! scheduling overhead in isolation.

use criterion::{criterion_group, criterion_main, Criterion};
use latcirc::estimate::{hadamard_test, EstimatorConfig};
use latcirc::linalg::{cis, C_I, C_ONE};
use latcirc::par;
use latcirc::qcirc::{apply_gate, Gate, ProductState, StateVector};
use latcirc::spinlat::{BoundaryCondition, EdgeModel, LatticeModel, PlanarCircuitGraph};
use latcirc::{compile, qcirc};
use std::hint::black_box;

fn partition_sum(c: &mut Criterion) {
    // 20 free spins: a 4×5 Ising grid with open boundaries.
    let g = PlanarCircuitGraph::full_grid(4, 5).unwrap();
    let model = LatticeModel::Edge(
        EdgeModel::ising_uniform(g, C_I, cis(0.7), BoundaryCondition::Open).unwrap(),
    );
    let plan = model.oracle_plan().unwrap();
    let q = 2u64;
    let count = q.pow(plan.free as u32);
    let eval = |idx: u64| {
        let mut config = [0u8; 24];
        let mut x = idx;
        for i in (0..plan.free).rev() {
            config[i] = (x % q) as u8;
            x /= q;
        }
        plan.weight(&config[..plan.free])
    };
    let mut group = c.benchmark_group("partition_sum_2^20");
    group.sample_size(10);
    group.bench_function("parallel", |b| {
        b.iter(|| black_box(par::complex_sum_indexed_par(count, eval)))
    });
    group.bench_function("sequential", |b| {
        b.iter(|| black_box(par::complex_sum_indexed_seq(count, eval)))
    });
    group.finish();
}

fn gate_application(c: &mut Criterion) {
    let n = 13;
    let mut st = StateVector::basis(n, 2, 0);
    let dim = st.amps.len();
    st.amps
        .iter_mut()
        .enumerate()
        .for_each(|(i, z)| *z = cis(i as f64 * 0.37) / (dim as f64).sqrt());
    let m = latcirc::linalg::mat(&[
        &[C_I, C_ONE, C_ONE, C_ONE],
        &[C_ONE, C_I, C_ONE, C_ONE],
        &[C_ONE, C_ONE, C_I, C_ONE],
        &[C_ONE, C_ONE, C_ONE, C_I],
    ]);
    let gate = Gate::new(m, vec![3, 9], "G", 2, n).unwrap();
    let mut group = c.benchmark_group("apply_gate_13q");
    group.bench_function("default_pool", |b| b.iter(|| black_box(apply_gate(&st, &gate).unwrap())));
    let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    group.bench_function("one_thread", |b| {
        b.iter(|| single.install(|| black_box(apply_gate(&st, &gate).unwrap())))
    });
    group.finish();
}

fn estimator_shots(c: &mut Criterion) {
    let gates = [
        compile::IsingSourceGate::T { wire: 0 },
        compile::IsingSourceGate::TTWvTT { top: 0 },
        compile::IsingSourceGate::T { wire: 1 },
    ];
    let circuit = compile::ising_source_circuit(&gates, 2).unwrap();
    let plus = ProductState::plus(2, 2);
    let cfg = EstimatorConfig { shots: Some(1 << 20), epsilon: 0.05, delta: 0.01, seed: 11 };
    c.bench_function("hadamard_test_2^20_shots", |b| {
        b.iter(|| black_box(hadamard_test(&circuit, &plus, &plus, &cfg).unwrap()))
    });
}

fn circuit_trace(c: &mut Criterion) {
    let gates = [
        compile::IsingSourceGate::TTWvTT { top: 0 },
        compile::IsingSourceGate::TTWvTT { top: 1 },
        compile::IsingSourceGate::T { wire: 2 },
    ];
    let circuit = compile::ising_source_circuit(&gates, 3).unwrap();
    c.bench_function("trace_3q_circuit", |b| {
        b.iter(|| black_box(qcirc::trace(&circuit).unwrap()))
    });
}

criterion_group!(benches, partition_sum, gate_application, estimator_shots, circuit_trace);
criterion_main!(benches);

use iplp::ipm::{IpmConfig, StepSolverKind};
use iplp::krylov::KrylovMethod;
use iplp::mps::read_mps_path;
use iplp::run::{solve_problem};
use iplp::standard::to_standard_form;

fn main() {
    let p = read_mps_path("data/netlib/afiro.mps.gz").unwrap();
    println!("parsed: m={} n={} nnz={}", p.nrows(), p.ncols(), p.a.nnz());
    let s = to_standard_form(&p).unwrap();
    println!("standard: m={} n={}", s.nrows(), s.ncols());

    for method in [KrylovMethod::Cgne, KrylovMethod::Mrne, KrylovMethod::AbGmres] {
        let mut cfg = IpmConfig::default();
        cfg.krylov.method = method;
        let t = std::time::Instant::now();
        match solve_problem(&p, &cfg) {
            Ok(out) => println!(
                "{:8} status={:?} iters={} krylov={} gamma={:.2e} obj={:.9} ms={:.1}",
                method.name(), out.status, out.ipm_iterations, out.krylov_iterations,
                out.gamma, out.objective, t.elapsed().as_secs_f64()*1e3
            ),
            Err(e) => println!("{:8} ERROR {e}", method.name()),
        }
    }
    let mut cfg = IpmConfig::default();
    cfg.step_solver = StepSolverKind::DirectLdlt;
    let t = std::time::Instant::now();
    match solve_problem(&p, &cfg) {
        Ok(out) => println!(
            "{:8} status={:?} iters={} gamma={:.2e} obj={:.9} ms={:.1}",
            "ldlt", out.status, out.ipm_iterations, out.gamma, out.objective,
            t.elapsed().as_secs_f64()*1e3
        ),
        Err(e) => println!("{:8} ERROR {e}", "ldlt"),
    }
}

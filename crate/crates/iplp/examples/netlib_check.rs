use iplp::ipm::{IpmConfig, StepSolverKind};
use iplp::krylov::KrylovMethod;
use iplp::mps::read_mps_path;
use iplp::run::solve_problem;
use iplp::standard::to_standard_form;

fn main() {
    let problems = ["afiro", "adlittle", "sc50a", "sc50b", "blend", "share2b", "scagr7", "sc105", "kb2"];
    for name in problems {
        let path = format!("data/netlib/{name}.mps.gz");
        let p = read_mps_path(&path).unwrap();
        let s = to_standard_form(&p).unwrap();
        print!("{name:9} m={:4} n={:4} |", s.nrows(), s.ncols());
        for method in [KrylovMethod::Cgne, KrylovMethod::Mrne, KrylovMethod::AbGmres] {
            let mut cfg = IpmConfig::default();
            cfg.krylov.method = method;
            let t = std::time::Instant::now();
            match solve_problem(&p, &cfg) {
                Ok(out) => print!(
                    " {}:{}{} g={:.0e} t={:.0}ms",
                    method.name(), out.ipm_iterations,
                    if out.status == iplp::ipm::IpmStatus::Optimal { "" } else { "!" },
                    out.gamma, t.elapsed().as_secs_f64()*1e3
                ),
                Err(e) => print!(" {}:ERR({e})", method.name()),
            }
        }
        let mut cfg = IpmConfig::default();
        cfg.step_solver = StepSolverKind::DirectLdlt;
        match solve_problem(&p, &cfg) {
            Ok(out) => print!(
                " ldlt:{}{} obj={:.7e}",
                out.ipm_iterations,
                if out.status == iplp::ipm::IpmStatus::Optimal { "" } else { "!" },
                out.objective
            ),
            Err(e) => print!(" ldlt:ERR({e})"),
        }
        println!();
    }
}

use iplp::ipm::IpmConfig;
use iplp::krylov::KrylovMethod;
use iplp::mps::read_mps_path;
use iplp::run::solve_problem;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let name = args.get(1).map(|s| s.as_str()).unwrap_or("share2b");
    let method = match args.get(2).map(|s| s.as_str()).unwrap_or("cgne") {
        "mrne" => KrylovMethod::Mrne,
        "abgmres" => KrylovMethod::AbGmres,
        _ => KrylovMethod::Cgne,
    };
    let mult: usize = args.get(3).map(|s| s.parse().unwrap()).unwrap_or(1);
    let p = read_mps_path(format!("data/netlib/{name}.mps.gz")).unwrap();
    let mut cfg = IpmConfig::default();
    cfg.krylov.method = method;
    cfg.krylov_max_iter_factor = mult as f64;
    if let Ok(v) = std::env::var("BAL") {
        cfg.balance_ratio = v.parse().unwrap();
    }
    let out = solve_problem(&p, &cfg).unwrap();
    println!("status={:?} iters={} gamma={:.2e}", out.status, out.ipm_iterations, out.gamma);
    for s in out.trace.steps.iter() {
        println!(
            "k={:2} mu={:9.2e} gamma={:9.2e} sigma={:6.3} a_p={:5.3} a_d={:5.3} eps_in={:8.1e} pred(it={:3} conv={} res={:.1e} bd={}) corr(it={:3} conv={} res={:.1e}) cent_fb={}",
            s.step, s.mu, s.gamma, s.sigma, s.alpha_p, s.alpha_d, s.eps_in,
            s.predictor.iterations, s.predictor.converged, s.predictor.relative_residual, s.predictor.breakdown,
            s.corrector.as_ref().map_or(0, |c| c.iterations),
            s.corrector.as_ref().map_or(true, |c| c.converged),
            s.corrector.as_ref().map_or(0.0, |c| c.relative_residual),
            s.centrality_fallback,
        );
    }
}

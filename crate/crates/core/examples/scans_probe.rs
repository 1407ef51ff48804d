use polarwave::kernels::scans::*;

fn main() {
    let t0 = std::time::Instant::now();
    let mode = std::env::args().nth(1).unwrap_or_default();
    if mode == "k0" || mode.is_empty() {
        for nu in [0.5, 1.0, 2.0, 3.0, 5.0, 8.0] {
            let rep = k0_scan(nu, 1000.0, 14).unwrap();
            println!(
                "k0 nu={nu}: C={:.4} slope={:+.4} expected={:+.2}  [{:?}]",
                rep.fitted_c, rep.tail_slope, rep.expected_slope, t0.elapsed()
            );
        }
    }
    if mode == "rj" || mode.is_empty() {
        let cfg = RjScanConfig::default();
        let pts = rj_scan(&cfg).unwrap();
        for p in &pts {
            println!("rj j={} ratio={:.6e}", p.index, p.ratio);
        }
        let fit = log2_slope(&pts);
        println!("rj slope = {:+.4} ± {:.4}  [{:?}]", fit.slope, fit.stderr, t0.elapsed());
    }
    if mode == "t1" || mode.is_empty() {
        for nu in [1.0, 2.5, 8.0] {
            let cfg = T1ScanConfig { nu, ..Default::default() };
            let pts = t1_shell_scan(&cfg).unwrap();
            let lo = pts.iter().map(|p| p.ratio).fold(f64::INFINITY, f64::min);
            let hi = pts.iter().map(|p| p.ratio).fold(0.0f64, f64::max);
            println!("t1 nu={nu}: variation={:.3} ({:.3e}..{:.3e})  [{:?}]", hi/lo, lo, hi, t0.elapsed());
        }
    }
    if mode == "prod" || mode.is_empty() {
        let reps = product_scan(1.0, 4, 10, &[1.0/3.0, 1.0, 3.0], 24).unwrap();
        for r in &reps {
            println!("prod j={}: C={:.4} beyond={:.3e}", r.j, r.fitted_c, r.beyond_breakpoint);
        }
        println!("[{:?}]", t0.elapsed());
    }
}

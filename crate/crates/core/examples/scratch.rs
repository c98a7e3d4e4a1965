use evansbl::profile::{solve_profile, LayerParams, Side};

fn main() {
    let p = LayerParams::new(1.0, 0.4002375259085311, 0.42772564961310455, Side::Outflow).unwrap();
    let prof = solve_profile(&p, 12.0, 1e-8, 1e-9).unwrap();
    let g = prof.grid();
    println!("nodes: {}", g.len());
    let mut bad = 0;
    for w in g.windows(2) {
        let (v0, v1) = (prof.vhat_at(w[0]), prof.vhat_at(w[1]));
        if v1 >= v0 {
            bad += 1;
            if bad < 6 {
                println!("violation x {} -> {}: v {:.17e} -> {:.17e}", w[0], w[1], v0, v1);
            }
        }
    }
    println!("total violations: {bad}");
    for &x in g.iter().take(6) {
        println!("x={x:.6} v={:.17e}", prof.vhat_at(x));
    }
}

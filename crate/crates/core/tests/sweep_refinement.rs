//! Halving the cell size should not change the class inside coarse cells
//! whose four corners agree, up to speckle from coexisting attractors.

use bcnf::curves::Window;
use bcnf::sweep::{run_sweep, SweepConfig};

#[test]
fn refinement_keeps_classes_of_uniform_coarse_cells() {
    let n = 50;
    let coarse = SweepConfig::new(-1.2, -1.0, Window::new((0.0, 2.0), (-1.0, 6.0)), n, n);
    // The fine grid contains every coarse point plus the midpoints.
    let mut fine = coarse.clone();
    fine.nx = 2 * n - 1;
    fine.ny = 2 * n - 1;
    let (rc, rf) = (run_sweep(&coarse).unwrap(), run_sweep(&fine).unwrap());
    let (mut total, mut same) = (0usize, 0usize);
    for iy in 0..n - 1 {
        for ix in 0..n - 1 {
            let c = rc.get(ix, iy);
            if [(1, 0), (0, 1), (1, 1)].iter().any(|&(a, b)| rc.get(ix + a, iy + b) != c) {
                continue;
            }
            total += 1;
            same += usize::from(rf.get(2 * ix + 1, 2 * iy + 1) == c);
        }
    }
    let frac = same as f64 / total as f64;
    println!("uniform coarse cells keeping their class: {same}/{total} = {frac:.4}");
    assert!(frac >= 0.95, "{same}/{total}");
}

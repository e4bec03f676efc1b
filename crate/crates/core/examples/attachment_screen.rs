//! Lists every way of attaching a single ±1-framed vertex to the D2 plumbing
//! that keeps the boundary a homology sphere.

use num_traits::{One, Signed};
use plumbkit::calculus::unit_attachments;
use plumbkit::fixtures;

fn main() {
    let g = fixtures::d2();
    let all = unit_attachments(&g);
    let unimodular: Vec<_> = all.iter().filter(|(_, det)| det.abs().is_one()).collect();
    println!(
        "{} attachments screened, {} with |det| = 1",
        all.len(),
        unimodular.len()
    );
    for (targets, det) in unimodular {
        let names: Vec<&str> = targets.iter().map(|v| v.as_str()).collect();
        println!("  [{}] det {det}", names.join(", "));
    }
}

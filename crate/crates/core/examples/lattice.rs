fn main() {
    let pol = qseries::Policy::default();
    for n in [1usize, 10] {
    let t = std::time::Instant::now();
    let _ = qseries::identities::degenerate::degeneration_lattice(5, n, &pol).unwrap();
    println!("{n}: {:?}", t.elapsed());
    }
}

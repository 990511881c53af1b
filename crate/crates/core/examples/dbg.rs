fn main() {
    use datam::compiler::compile_opts;
    use datam::gallery::*;
    let src = make_square_zigzag(8).unwrap();
    let out = compile_opts(&src, 100_000, true).unwrap();
    let seq = datam::run(&out.dtas, datam::SchedulerPolicy::LexMin, 5_000_000);
    let m = out.scale as i32;
    for (p, c) in seq.result().iter() {
        let n = &out.dtas.tile(c.tile).name;
        if n.starts_with("c:") {
            println!("{n} at {p} block ({},{})", p.x.div_euclid(m), p.y.div_euclid(m));
        }
    }
}

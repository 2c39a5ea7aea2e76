use plts_core::automata::{ltl_to_nba, SpecPumpNba};
use plts_core::formula::{alternation, parse, rel_color, Alphabet, Formula};
use std::time::Instant;

fn main() {
    // <GFp o | FG !o, false>: negated-guarantee side is ¬rel(false)=true.
    let assumption = parse("(G Fp o) | (F G !o)").unwrap();
    let spec_formula = Formula::and(
        alternation("rp"),
        Formula::and(alternation("r"), rel_color(&assumption, "r").unwrap()),
    );
    println!("formula size: {}", spec_formula.size());
    let alphabet = Alphabet::new(["sched_p0", "o", "r", "rp"]);
    let t = Instant::now();
    let nba = ltl_to_nba(&spec_formula, &alphabet).unwrap();
    println!("spec NBA: {} states ({:?})", nba.state_count(), t.elapsed());
    for b in [1usize, 2, 3, 4] {
        let t = Instant::now();
        let n = SpecPumpNba::new(nba.clone(), b, "r", "rp").unwrap();
        println!(
            "composed, X={b}: {} states ({:?})",
            n.state_count(),
            t.elapsed()
        );
    }
}

use plts_core::automata::{ltl_to_nba, SpecPumpNba};
use plts_core::formula::{alternation, parse, rel_color, Alphabet, Formula};
use std::time::Instant;

fn main() {
    // Assume-guarantee violation automaton for the scheduling example:
    // prompt-fair scheduling assumption, alternating-output guarantee.
    let assumption = parse("G Fp sched_p1 & G Fp sched_p2").unwrap();
    let guarantee = parse("G (Fp c & Fp !c & Fp d & Fp !d)").unwrap();
    let spec_formula = Formula::and(
        Formula::and(
            alternation("rp"),
            rel_color(&guarantee, "rp").unwrap().negated_ltl().unwrap(),
        ),
        Formula::and(alternation("r"), rel_color(&assumption, "r").unwrap()),
    );
    println!("formula size: {}", spec_formula.size());
    let alphabet = Alphabet::new(["a", "b", "sched_p1", "sched_p2", "c", "d", "r", "rp"]);
    let t = Instant::now();
    let nba = ltl_to_nba(&spec_formula, &alphabet).unwrap();
    println!("spec NBA: {} states ({:?})", nba.state_count(), t.elapsed());
    let xs: Vec<usize> = std::env::args()
        .skip(1)
        .map(|a| a.parse().unwrap())
        .collect();
    for b in xs {
        let t = Instant::now();
        let n = SpecPumpNba::new(nba.clone(), b, "r", "rp").unwrap();
        println!(
            "composed, X={b}: {} states, bound {} ({:?})",
            n.state_count(),
            n.state_bound(),
            t.elapsed()
        );
    }
}

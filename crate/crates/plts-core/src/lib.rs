pub mod architecture;
pub mod automata;
pub mod colored;
pub mod formula;
pub mod machine;
pub mod testkit;

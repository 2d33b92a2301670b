//! Hardness gadgets: formulas, DAGs and machines turned into automata.

pub mod cnf_unary;
pub mod dag;
pub mod dnf;
pub mod formula;
pub mod mk;
pub mod pt_hardness;
pub mod tm;
pub mod wword;

pub use cnf_unary::cnf3_to_unary_nfa;
pub use dag::{dag_gadget, Dag};
pub use dnf::{dnf_to_podfa_family, dnf_to_ptnfa, dnf_to_rponfa};
pub use formula::{Cnf3Formula, DnfFormula};
pub use mk::mk_gadget;
pub use pt_hardness::pt_hardness_gadget;
pub use tm::{encode_computation, encode_run, tm_to_ptnfa, Move, TmGadget, TmLimits, TmSpec};
pub use wword::{a_kn, strip_redundant, w_length, w_word};

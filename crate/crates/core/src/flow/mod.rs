//! Taylor-method integration of the spin-orbit fields, the 2π return maps
//! G_e and P_e with jet transport, and the jet goodness diagnostic.

pub mod fields;
pub mod jet_check;
pub mod maps;
pub mod series;
pub mod taylor;

pub use fields::{AveragedField, FullField};
pub use jet_check::{jet_goodness_test, JetGoodness};
pub use maps::{
    flow_u, map_g, map_p, map_p_averaged, return_map, return_map_batch, return_map_jets,
    return_map_jets_batch, variational_convert, FlowState, Model, ReturnJets,
};
pub use taylor::{flow_to, taylor_step, SeriesField, TaylorPolicy};

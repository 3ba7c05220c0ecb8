pub mod config;
pub mod error;
pub mod free_malcev;
pub mod graded_lie;
pub mod group_algebra;
pub mod groups;
pub mod io;
pub mod linalg;
pub mod malcev;
pub mod moufang;
pub mod pipeline;
pub mod report;
pub mod triality;

pub mod abgroup;
pub mod perversity;
pub mod strata;
pub mod chow;
pub mod cycles;
pub mod verdict;
pub mod cocycles;
pub mod cone;
pub mod cli;

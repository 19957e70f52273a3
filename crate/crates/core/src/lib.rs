pub mod exactalg;
pub mod fds;
pub mod groups;
pub mod handles;
pub mod serde_util;
pub mod verdict;

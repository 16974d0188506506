//! EDGAR server-log attention analytics: parse DERA log rows, strip robots
//! and non-research requests, assign IP3 blocks to institutions, validate
//! assignments against holdings access, and count per-campaign views.

mod filters;
mod ipmap;
mod log_parse;
mod views;

pub use filters::{filter_robots, filter_valid, DEFAULT_DEDUP_WINDOW_SECS, DEFAULT_ROBOT_THRESHOLD};
pub use ipmap::{assign_ip3, backtest_validity, IpAssignment, OrgIp, Quarter};
pub use log_parse::{open_log_reader, parse_log, Ip3, LogEntry, LogParse};
pub use views::{count_views, ViewCount};

// SPDX-License-Identifier: Apache-2.0
//! Model files, tasks on them, and their reports.

pub mod ast;
pub mod elaborate;
pub mod parser;
pub mod report;
pub mod tasks;

pub use ast::{print_doc, Item, ModelDoc, ModelRef};
pub use elaborate::{elaborate, model_block, parse_model_ref, ElabHomotopy, ElabModel, Options, Workspace};
pub use parser::{parse_model, render_diagnostics};
pub use report::{Report, Status};
pub use tasks::{parse_range, run_batch, run_task, Command, GSpecArg, Task};

//! Exact character tables and decomposition of class functions.

mod classfn;
mod table;

pub use classfn::{decompose, perm_character, Action, ClassFunction};
pub use table::{character_table, format_complex, CharacterTable, ClassExport, TableExport};

pub mod closed;
pub mod expr;
pub mod identity;
pub mod registry;
pub mod routes;
pub mod templates;

pub use closed::*;
pub use expr::*;
pub use identity::*;
pub use registry::{catalog, lookup, registry_catalog, table_rows};
pub use templates::{check_relation, instance, Template};

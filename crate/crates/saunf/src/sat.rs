pub mod cnf;
pub mod oracle;
pub mod solver;
pub mod tseitin;

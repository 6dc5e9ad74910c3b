#![allow(dead_code)]

pub mod assoc;
pub mod perm;

// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Decorated trivalent graphs.
//!
//! The crate implements α/β decorations of trivalent graphs, trivial
//! modifications, IH moves with exact decoration transport, the invariants
//! that classify decorations up to these moves, a normal-form reducer and a
//! brute-force orbit oracle.

pub mod cli;
pub mod decoration;
pub mod graph;
pub mod invariants;
mod lattice;
pub mod moves;
pub mod oracle;

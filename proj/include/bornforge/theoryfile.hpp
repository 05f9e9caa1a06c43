#pragma once

#include <string>
#include <utility>
#include <vector>

#include "bornforge/linalg.hpp"
#include "bornforge/theory.hpp"
#include "bornforge/weighted.hpp"

namespace bornforge {

/**
 * One named generator: a matrix literal with declared domain/codomain
 * objects and a role tag. Roles default to "process"; "state" and "effect"
 * mark generators that the instantiated theory offers as sampler output.
 */
struct GeneratorDecl {
  std::string name;
  std::string dom;
  std::string cod;
  Matrix matrix;  // cod dim rows x dom dim columns
  std::string role = "process";

  bool operator==(const GeneratorDecl& other) const;
};

/**
 * A parsed theory description: probability rule, named wire dimensions and
 * named generator matrices. The object name "I" is predeclared as the
 * monoidal unit (dimension 1) and may be used without declaration.
 *
 * Text format, one statement per line ('#' starts a comment):
 *
 *   theory <name>
 *   rule born k=<real> | rule trace | rule stochastic
 *   simplified true|false
 *   object <name> <dim>
 *   gen <name> : <dom> -> <cod> = [a+bi, ...; ...]
 *   role <gen-name> process|state|effect
 *
 * Matrix literals may span lines; rows are separated by ';', entries by ','.
 */
struct TheoryFile {
  std::string name;
  std::string rule_kind = "born";  // "born" | "trace" | "stochastic"
  double born_k = 2.0;             // only meaningful for rule_kind == "born"
  bool simplified = true;
  std::vector<std::pair<std::string, int>> objects;  // declaration order
  std::vector<GeneratorDecl> generators;             // declaration order

  bool operator==(const TheoryFile& other) const;
};

/**
 * Parses theory text. Throws ParseError (with source location) on malformed
 * syntax, ShapeError when a matrix literal disagrees with the declared
 * objects, UnknownObject when a referenced object was never declared.
 */
TheoryFile parse_theory(const std::string& text);

/** Renders the file as text; parse_theory maps the output back to an equal value. */
std::string serialize(const TheoryFile& tf);

/**
 * Instantiates the executable theory the file describes. Generators with
 * state/effect roles feed the samplers; when the theory is simplified and no
 * declared generator fits a requested shape, generic dense samplers fill in.
 */
TheorySpec to_theory_spec(const TheoryFile& tf);

/**
 * Parses a weighted-set file: one `weight | [matrix]` record per line, '#'
 * comments allowed. Weights are decimal reals > 0; all matrices must share
 * one shape. The objects are plain wires of the matrix dimensions.
 */
WeightedSet parse_weighted_set(const std::string& text);

/**
 * Parses a JSON matrix literal: an array of rows, each entry either a real
 * number or an [re, im] pair. Returns a wire-to-wire morphism.
 */
Morphism parse_matrix_json(const std::string& text);

}  // namespace bornforge

#ifndef PPDEF_PROBLEM_FILE_HPP
#define PPDEF_PROBLEM_FILE_HPP

#include <iosfwd>

#include "ppdef/oracle.hpp"

namespace ppdef {

struct Query {
  int id = 0;
  Mode mode = Mode::pp;
  std::string target;             // empty for identity queries
  std::vector<std::string> from;  // theta relation names
};

struct FileOptions {
  SearchLimits limits;
  int replay_size = -1;  // per-coordinate size; -1 means target arity + 2
  int oracle_max_vars = 2;
  int oracle_max_atoms = 6;
  bool parallel = false;
};

struct ProblemFile {
  std::shared_ptr<const BaseStructure> base;
  std::vector<RelationDef> relations;
  std::vector<Query> queries;
  FileOptions options;
};

struct FileError {
  int exit_code = 2;  // 2 parse error, 3 invalid base
  int line = 0;
  std::string message;
};

std::variant<ProblemFile, FileError> parse_problem_file(std::istream& is);

// Runs every query, writing one result line per query to out. Returns the
// process exit code (0 decided, 4 some query inconclusive). certificate_dir
// empty disables certificate emission.
int run_problem_file(const ProblemFile& pf, std::ostream& out,
                     const std::string& certificate_dir);

}  // namespace ppdef

#endif

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "ppdef/certificate.hpp"
#include "ppdef/problem_file.hpp"

int main(int argc, char** argv) {
  CLI::App app{"definability and identity checker for bounded ordered homogeneous bases"};

  std::string file;
  std::string cert_dir;
  std::string cert_path;
  bool list_builtins = false;
  app.add_option("problem", file, "problem file (default: stdin)");
  app.add_option("--file", file, "problem file (default: stdin)");
  app.add_option("--emit-certificates", cert_dir,
                 "write a certificate per NOT-DEFINABLE query into this directory");
  app.add_option("--check-certificate", cert_path,
                 "verify a certificate against the file's single definability query");
  app.add_flag("--list-builtins", list_builtins, "list builtin bases and exit");

  CLI11_PARSE(app, argc, argv);

  if (list_builtins) {
    for (const std::string& n : ppdef::builtin_names()) std::cout << n << "\n";
    return 0;
  }

  std::istream* in = &std::cin;
  std::ifstream f;
  if (!file.empty()) {
    f.open(file);
    if (!f) {
      std::cerr << "error: cannot open " << file << "\n";
      return 2;
    }
    in = &f;
  }

  auto parsed = ppdef::parse_problem_file(*in);
  if (std::holds_alternative<ppdef::FileError>(parsed)) {
    const auto& e = std::get<ppdef::FileError>(parsed);
    std::cerr << "error (line " << e.line << "): " << e.message << "\n";
    return e.exit_code;
  }
  const ppdef::ProblemFile& pf = std::get<ppdef::ProblemFile>(parsed);

  if (!cert_path.empty()) {
    const ppdef::Query* q = nullptr;
    for (const auto& query : pf.queries)
      if (query.mode != ppdef::Mode::identity) {
        if (q) {
          std::cerr << "error: --check-certificate needs exactly one definability query\n";
          return 2;
        }
        q = &query;
      }
    if (!q) {
      std::cerr << "error: no definability query to check against\n";
      return 2;
    }
    ppdef::Problem p;
    p.base = pf.base;
    p.mode = q->mode;
    for (const auto& r : pf.relations)
      if (r.name == q->target) p.target = r;
    for (const auto& fr : q->from)
      for (const auto& r : pf.relations)
        if (r.name == fr) p.theta.push_back(r);
    std::ifstream cf(cert_path);
    if (!cf) {
      std::cerr << "error: cannot open " << cert_path << "\n";
      return 2;
    }
    ppdef::CertificateCheck c = ppdef::check_certificate(cf, p);
    std::cout << (c.ok ? "VALID" : "INVALID") << ": " << c.message << "\n";
    return c.ok ? 0 : 1;
  }

  return ppdef::run_problem_file(pf, std::cout, cert_dir);
}

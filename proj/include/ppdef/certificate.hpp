#ifndef PPDEF_CERTIFICATE_HPP
#define PPDEF_CERTIFICATE_HPP

#include <iosfwd>

#include "ppdef/oracle.hpp"

namespace ppdef {

// Stable digest of a problem (base, target, theta, mode) used to tie a
// certificate to the run that produced it.
std::string problem_digest(const Problem& p);

// Emits a self-contained certificate: header, type legend, behavior table,
// replay report, status line.
void write_certificate(std::ostream& os, const Problem& p, const Behavior& b,
                       const ReplayReport& rep, const std::vector<int>& replay_sizes);

struct CertificateCheck {
  bool ok = false;
  std::string message;
};

// Re-parses a certificate and re-runs every check (behavior validity,
// violation, preservation, replay) against the given problem.
CertificateCheck check_certificate(std::istream& is, const Problem& p);

}  // namespace ppdef

#endif

// Commit to a bit over three rounds, serialize the transcript, read it back
// and verify it.

#include "rbc/rbc.hpp"

#include <iostream>

int main() {
  const rbc::ProtocolParams params(2, rbc::parse_time("1"), rbc::parse_time("0.005"),
                                   rbc::parse_time("0.01"));
  const rbc::HonestStrategy honest;
  const rbc::Transcript t = rbc::run_protocol(params, 3, rbc::Bit::one, 1, 2, honest);

  const rbc::Transcript back = rbc::parse_transcript(rbc::serialize(t));
  const rbc::Verdict v = rbc::verify(back);
  std::cout << rbc::to_json(v, back).dump(2) << '\n';
  return v.accepted() ? 0 : 1;
}

#include "gavms/output.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>

namespace gavms {

std::string format_number(double v) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw std::runtime_error("number formatting failed");
  return std::string(buf, end);
}

namespace {

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  return out;
}

void close_output(std::ofstream& out, const std::string& path) {
  out.close();
  if (!out) throw std::runtime_error("error while writing '" + path + "'");
}

}  // namespace

void write_vtu(const DomainSpace& space, const Vector& velocity, const Vector& pressure, const std::string& path) {
  const DomainMesh& mesh = space.mesh();
  const int nv = space.vertex_count();
  const int nt = space.element_count();
  if (velocity.size() != space.velocity_dofs()) throw std::invalid_argument("velocity has the wrong size");
  if (pressure.size() != 0 && pressure.size() != nv) throw std::invalid_argument("pressure has the wrong size");

  std::ofstream out = open_output(path);
  out << "<?xml version=\"1.0\"?>\n"
      << "<VTKFile type=\"UnstructuredGrid\" version=\"0.1\" byte_order=\"LittleEndian\">\n"
      << "  <UnstructuredGrid>\n"
      << "    <Piece NumberOfPoints=\"" << nv << "\" NumberOfCells=\"" << nt << "\">\n"
      << "      <PointData Vectors=\"velocity\" Scalars=\"pressure\">\n"
      << "        <DataArray type=\"Float64\" Name=\"velocity\" NumberOfComponents=\"3\" format=\"ascii\">\n";
  // Vertices are the first P2 nodes.
  for (int v = 0; v < nv; ++v)
    out << "          " << format_number(velocity[space.velocity_dof(0, v)]) << ' '
        << format_number(velocity[space.velocity_dof(1, v)]) << " 0\n";
  out << "        </DataArray>\n"
      << "        <DataArray type=\"Float64\" Name=\"pressure\" format=\"ascii\">\n";
  for (int v = 0; v < nv; ++v) out << "          " << format_number(pressure.size() ? pressure[v] : 0.0) << '\n';
  out << "        </DataArray>\n"
      << "      </PointData>\n"
      << "      <Points>\n"
      << "        <DataArray type=\"Float64\" NumberOfComponents=\"3\" format=\"ascii\">\n";
  for (const Vec2& p : mesh.vertices) out << "          " << format_number(p.x) << ' ' << format_number(p.y) << " 0\n";
  out << "        </DataArray>\n"
      << "      </Points>\n"
      << "      <Cells>\n"
      << "        <DataArray type=\"Int32\" Name=\"connectivity\" format=\"ascii\">\n";
  for (const auto& t : mesh.triangles) out << "          " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  out << "        </DataArray>\n"
      << "        <DataArray type=\"Int32\" Name=\"offsets\" format=\"ascii\">\n";
  for (int k = 1; k <= nt; ++k) out << "          " << 3 * k << '\n';
  out << "        </DataArray>\n"
      << "        <DataArray type=\"UInt8\" Name=\"types\" format=\"ascii\">\n";
  for (int k = 0; k < nt; ++k) out << "          5\n";
  out << "        </DataArray>\n"
      << "      </Cells>\n"
      << "    </Piece>\n"
      << "  </UnstructuredGrid>\n"
      << "</VTKFile>\n";
  close_output(out, path);
}

void write_convergence_csv(const std::string& path, const std::vector<ConvergenceRow>& rows) {
  std::ofstream out = open_output(path);
  out << "N,h,dt,err_l2l2,rate_l2,err_l2h1,rate_h1,status\n";
  auto optional = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string(); };
  for (const ConvergenceRow& r : rows)
    out << r.n << ',' << format_number(r.h) << ',' << format_number(r.dt) << ',' << format_number(r.l2l2) << ','
        << optional(r.rate_l2) << ',' << format_number(r.l2h1) << ',' << optional(r.rate_h1) << ','
        << (r.converged ? "converged" : "diverged") << '\n';
  close_output(out, path);
}

void write_energy_csv(const std::string& path, const std::vector<EnergySample>& samples) {
  std::ofstream out = open_output(path);
  out << "t,ke_atm,ke_ocean,diss_atm,diss_ocean,aed,total_atm,total_ocean\n";
  for (const EnergySample& s : samples)
    out << format_number(s.time) << ',' << format_number(s.kinetic[0]) << ',' << format_number(s.kinetic[1]) << ','
        << format_number(s.dissipation[0]) << ',' << format_number(s.dissipation[1]) << ',' << format_number(s.aed)
        << ',' << format_number(s.total(Domain::atmosphere)) << ',' << format_number(s.total(Domain::ocean)) << '\n';
  close_output(out, path);
}

void write_step_csv(const std::string& path, const std::vector<StepTraceRow>& rows) {
  std::ofstream out = open_output(path);
  out << "t,norm_atm,norm_ocean,blowup_flag\n";
  for (const StepTraceRow& r : rows)
    out << format_number(r.time) << ',' << format_number(r.norm[0]) << ',' << format_number(r.norm[1]) << ','
        << (r.blown_up ? 1 : 0) << '\n';
  close_output(out, path);
}

}  // namespace gavms

/* Compiled as C: checks that the public header is plain C and the library links. */
#include <stdio.h>

#include "isopar/isopar.h"

int main(void) {
  isopar_domain* domain = NULL;
  isopar_mesh* mesh = NULL;
  int vertices = 0, triangles = 0;
  double h = 0.0, shape = 0.0;

  if (isopar_domain_open("disk", &domain) != ISOPAR_OK) {
    fprintf(stderr, "%s\n", isopar_last_error());
    return 1;
  }
  if (isopar_mesh_generate(domain, 0.3, 42, &mesh) != ISOPAR_OK ||
      isopar_mesh_info(mesh, &vertices, &triangles, &h, &shape) != ISOPAR_OK) {
    fprintf(stderr, "%s\n", isopar_last_error());
    isopar_domain_free(domain);
    return 1;
  }
  printf("isopar %s: %d vertices, %d triangles\n", isopar_version(), vertices, triangles);
  isopar_mesh_free(mesh);
  isopar_domain_free(domain);
  return triangles > 0 ? 0 : 1;
}

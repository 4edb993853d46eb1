#ifndef PJD_VERSION_HPP
#define PJD_VERSION_HPP

#define PJD_VERSION "1.0.0"

#endif

#pragma once

#include <string_view>

namespace tessera::vocab {

inline constexpr std::string_view kRdf = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline constexpr std::string_view kRdfType = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
inline constexpr std::string_view kRdfFirst = "http://www.w3.org/1999/02/22-rdf-syntax-ns#first";
inline constexpr std::string_view kRdfRest = "http://www.w3.org/1999/02/22-rdf-syntax-ns#rest";
inline constexpr std::string_view kRdfNil = "http://www.w3.org/1999/02/22-rdf-syntax-ns#nil";
inline constexpr std::string_view kRdfLangString =
    "http://www.w3.org/1999/02/22-rdf-syntax-ns#langString";

inline constexpr std::string_view kXsd = "http://www.w3.org/2001/XMLSchema#";
inline constexpr std::string_view kXsdString = "http://www.w3.org/2001/XMLSchema#string";
inline constexpr std::string_view kXsdInteger = "http://www.w3.org/2001/XMLSchema#integer";
inline constexpr std::string_view kXsdDateTime = "http://www.w3.org/2001/XMLSchema#dateTime";

inline constexpr std::string_view kProv = "http://www.w3.org/ns/prov#";
inline constexpr std::string_view kProvEntity = "http://www.w3.org/ns/prov#Entity";
inline constexpr std::string_view kProvSpecializationOf = "http://www.w3.org/ns/prov#specializationOf";
inline constexpr std::string_view kProvGeneratedAtTime = "http://www.w3.org/ns/prov#generatedAtTime";
inline constexpr std::string_view kProvInvalidatedAtTime =
    "http://www.w3.org/ns/prov#invalidatedAtTime";
inline constexpr std::string_view kProvWasAttributedTo = "http://www.w3.org/ns/prov#wasAttributedTo";
inline constexpr std::string_view kProvHasPrimarySource = "http://www.w3.org/ns/prov#hasPrimarySource";
inline constexpr std::string_view kProvWasDerivedFrom = "http://www.w3.org/ns/prov#wasDerivedFrom";

inline constexpr std::string_view kOco = "https://w3id.org/oc/ontology/";
inline constexpr std::string_view kOcoHasUpdateQuery = "https://w3id.org/oc/ontology/hasUpdateQuery";

inline constexpr std::string_view kSh = "http://www.w3.org/ns/shacl#";

}  // namespace tessera::vocab

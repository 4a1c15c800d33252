// Copyright 2026 The editjudge Authors
// SPDX-License-Identifier: Apache-2.0

// Long-form per-factor guidance rendered by the category-scoped prompt. The
// alignment entry is the reference wording; the other factors follow its
// structure (definition, what to examine, scope note, high/low criteria).

#include <array>

#include "editjudge/taxonomy.hpp"

namespace editjudge {
namespace {

const std::array<FactorGuide, kFactorCount>& guides() {
  static const std::array<FactorGuide, kFactorCount> kGuides = {{
      // unchanged_regions
      {"Evaluates whether image regions not specified or implied by the "
       "instruction remain unchanged after editing.",
       {"Identify which regions of the Input Image the Edit Instruction "
        "targets, explicitly or by implication",
        "Compare every other region of the Edited Image against the Input "
        "Image",
        "Look for objects that appeared, disappeared, moved, or changed "
        "outside the target region",
        "Check backgrounds, borders, and small details that are easy to "
        "overlook (text, signs, reflections)"},
       "This factor focuses on WHETHER untargeted regions were left alone. Do "
       "not evaluate the overall style of the image (that's Global "
       "Consistency) or the identity of subjects (that's Identity "
       "Preservation).",
       {"No unintended change is visible",
        "All regions outside the edit target match the Input Image",
        "Changes are confined to what the instruction requires"},
       {"The model changed large areas unrelated to the instruction",
        "Objects outside the target were added, removed, or altered",
        "The whole image was regenerated rather than locally edited"},
       "focus on untargeted regions staying untouched"},
      // global_consistency
      {"Evaluates if the scene's background, style, composition, and color "
       "palette remain consistent with the original image outside of the "
       "edited area.",
       {"Compare the overall style (photographic, illustrated, painted) of the "
        "Edited Image with the Input Image",
        "Check that the layout and composition of the scene are preserved",
        "Check that the global color palette, white balance, and contrast are "
        "preserved",
        "Look for global filters, crops, or aspect changes that the "
        "instruction did not ask for"},
       "This factor focuses on the image AS A WHOLE. Do not evaluate local "
       "untargeted changes (that's Unchanged Regions) or the lighting of the "
       "edited region itself (that's Color and Lighting).",
       {"The overall appearance is fully consistent",
        "Style, layout, and color scheme match the Input Image",
        "The edit reads as part of the same picture"},
       {"The overall style, layout, or color scheme is drastically different",
        "A global filter, recoloring, or restyling was applied without being "
        "requested",
        "The composition or framing changed substantially"},
       "focus on the global look of the scene"},
      // identity_preservation
      {"Ensures primary subjects not involved in the edit retain their "
       "original identity and recognizable features.",
       {"Identify the primary subjects (people, animals, objects) in the Input "
        "Image",
        "Determine which subjects the instruction does not ask to change",
        "Compare faces, body shapes, markings, logos, and other distinguishing "
        "features before and after",
        "Check that edited subjects keep the identity traits the instruction "
        "did not ask to alter"},
       "This factor focuses on WHO or WHAT the subjects are. Do not evaluate "
       "background changes (that's Unchanged Regions) or rendering artifacts "
       "(that's Image Quality).",
       {"All entities retain their distinguishing characteristics perfectly",
        "Faces, markings, and shapes are recognizably the same",
        "Only the attributes named in the instruction changed"},
       {"Core identifying features have been significantly altered or lost",
        "A subject was replaced by a different-looking individual or object",
        "Distinctive markings, text, or features were erased or distorted"},
       "focus on subjects keeping their identity"},
      // scale_realism
      {"Assesses whether the edited object or region has a realistic size and "
       "proportion relative to the scene context and depth.",
       {"Locate the edited or inserted object in the Edited Image",
        "Compare its size with nearby reference objects of known scale",
        "Check that its size is consistent with its depth in the scene",
        "Check that internal proportions of the object are natural"},
       "This factor focuses on SIZE and PROPORTION only. Do not evaluate "
       "placement relative to other objects (that's Spatial Relationship) or "
       "whether the instruction was followed (that's Alignment).",
       {"The scale is completely realistic and proportionate",
        "The edited object fits the perspective and depth of the scene",
        "Proportions relative to neighboring objects are natural"},
       {"The edited object's scale is highly unrealistic or implausible",
        "The object is far too large or too small for its position",
        "Internal proportions are visibly distorted"},
       "focus on size and proportion"},
      // spatial_relationship
      {"Evaluates whether edited elements maintain correct spatial "
       "relationships and perspective with surrounding objects.",
       {"Identify how the edited elements relate in position to surrounding "
        "objects",
        "Check occlusion order: what should be in front of or behind what",
        "Check contact points such as objects resting on surfaces",
        "Check that perspective and viewpoint agree with the rest of the scene"},
       "This factor focuses on WHERE things are relative to each other. Do not "
       "evaluate object size (that's Scale Realism) or boundary blending "
       "(that's Seamlessness).",
       {"All spatial relationships are perfectly maintained",
        "Occlusion, contact, and perspective are physically coherent",
        "Edited elements sit naturally within the scene geometry"},
       {"Objects are misplaced or spatial relationships are severely "
        "disrupted",
        "Objects float, intersect, or are occluded in the wrong order",
        "Perspective of the edited element conflicts with the scene"},
       "focus on relative placement and perspective"},
      // texture_and_detail
      {"Checks whether textures and fine details in the edited region are "
       "realistic and consistent with the surrounding image.",
       {"Zoom into the edited region and examine surface textures",
        "Compare grain, sharpness, and detail level with surrounding areas",
        "Check that materials look like what they are meant to be",
        "Look for smeared, repeated, or plastic-looking patterns"},
       "This factor focuses on the TEXTURE of the edited content. Do not "
       "evaluate global noise or blur across the image (that's Image Quality) "
       "or edge transitions (that's Seamlessness).",
       {"Texture and detail are seamlessly consistent throughout",
        "Materials look real and match the detail level of the scene",
        "Fine details are crisp where the surroundings are crisp"},
       {"Texture is notably different or detail is significantly degraded",
        "The edited region looks smeared, painted over, or synthetic",
        "Detail level clearly differs from the rest of the image"},
       "focus on texture and fine detail"},
      // image_quality
      {"Determines whether the edited image avoids visible artifacts such as "
       "noise, blur, or unnatural distortions.",
       {"Scan the whole Edited Image for noise, banding, or compression "
        "artifacts",
        "Check for blur that was not present in the Input Image",
        "Look for warped lines, melted shapes, or duplicated fragments",
        "Compare overall sharpness and cleanliness with the Input Image"},
       "This factor focuses on TECHNICAL artifacts. Do not evaluate whether "
       "the content matches the instruction (that's Alignment) or whether it "
       "is plausible (that's Plausibility).",
       {"Image quality is excellent with no artifacts",
        "The image is as clean and sharp as the Input Image",
        "No warping, banding, or noise is visible"},
       {"Severe noise, blurring, or distortions are present",
        "Visible generation artifacts such as warped or melted shapes",
        "Overall sharpness is clearly degraded"},
       "focus on technical artifacts"},
      // color_and_lighting
      {"Assesses whether the colors, shadows, and lighting of the edited "
       "region are consistent with the scene's illumination.",
       {"Determine the direction, color, and hardness of the scene's light",
        "Check that the edited region is lit from the same direction",
        "Check that shadows and reflections exist and point the right way",
        "Compare color temperature and saturation of the edited region with "
        "its surroundings"},
       "This factor focuses on LIGHT and COLOR of the edited region. Do not "
       "evaluate the global palette of the whole image (that's Global "
       "Consistency) or texture (that's Texture and Detail).",
       {"Colors, shadows, and lighting are perfectly harmonious",
        "Shadows and highlights agree with the scene's light sources",
        "Color temperature matches the surroundings"},
       {"Colors or lighting are severely mismatched with obvious "
        "inconsistencies",
        "Shadows are missing or point the wrong way",
        "The edited region looks pasted in under different light"},
       "focus on illumination and color consistency"},
      // seamlessness
      {"Evaluates whether transitions between edited and non-edited regions "
       "are smooth and visually natural.",
       {"Locate the boundary between edited and unedited regions",
        "Look for halos, hard cut lines, or visible masks along the boundary",
        "Check that lines and patterns continue across the boundary",
        "Check for abrupt changes in sharpness or noise at the boundary"},
       "This factor focuses on the BOUNDARY of the edit. Do not evaluate the "
       "texture inside the edited region (that's Texture and Detail) or its "
       "lighting (that's Color and Lighting).",
       {"Transitions are completely seamless and undetectable",
        "Lines and patterns continue naturally across the boundary",
        "No halos or cut marks are visible"},
       {"Transitions are obvious with clear visible boundaries or seams",
        "Halos, outlines, or rectangular patches reveal the edit",
        "Patterns break abruptly at the edit boundary"},
       "focus on the transition at the edit boundary"},
      // alignment
      {"Evaluates whether the edited image aligns with the specific edits "
       "provided in the instructions—whether what was requested was "
       "actually done.",
       {"Parse the Edit Instruction carefully to identify all requested "
        "changes (e.g., \"change the car to red\" requests a color change to "
        "red)",
        "Check whether each requested change is present in the Edited Image",
        "Verify accuracy of the changes: If the instruction asks for \"red,\" "
        "is it red (not orange or pink)? If it asks for \"a dog,\" is there a "
        "dog (not a cat)?",
        "Assess specificity matching: If the instruction specifies \"vintage "
        "wooden chair,\" does the result show a vintage wooden chair (not a "
        "modern plastic chair)?",
        "Check for correct targets: If the instruction says \"change the "
        "woman's hat,\" was the woman's hat changed (not someone else's or a "
        "different item)?",
        "Evaluate whether the edit follows the instruction's intent and "
        "specific requirements"},
       "This factor focuses on WHETHER the requested changes match what was "
       "asked for. Do not evaluate if ALL parts were done (that's "
       "Completeness) or if the result is realistic (that's Plausibility).",
       {"All requested changes accurately match the instruction's "
        "specifications",
        "Target objects/attributes are correctly identified and modified",
        "Specific details (colors, object types, attributes) align precisely "
        "with what was requested",
        "The edit clearly follows the instruction's intent"},
       {"Requested changes are incorrect or inaccurate (wrong color, wrong "
        "object type, etc.)",
        "Wrong elements were modified instead of the specified targets",
        "The edit contradicts or misinterprets the instruction",
        "Specific requirements are ignored or incorrectly executed"},
       "focus on accuracy of what was done"},
      // completeness
      {"Evaluates whether all components and constraints of the instruction "
       "are fully executed, rather than partially fulfilled.",
       {"List every component of the Edit Instruction, including counts, "
        "attributes, and constraints",
        "Check each component off against the Edited Image",
        "For counting edits, count the resulting objects exactly",
        "Note components that were started but left unfinished"},
       "This factor focuses on WHETHER EVERYTHING requested was done. Do not "
       "evaluate the accuracy of each change (that's Alignment) or its realism "
       "(that's Plausibility).",
       {"Every aspect of the instruction was fully executed",
        "Counts, attributes, and constraints are all satisfied",
        "No requested component is missing or half-done"},
       {"Major parts of the instruction were not executed",
        "Only one of several requested changes was made",
        "Requested counts or constraints are not met"},
       "focus on thoroughness—whether everything was done"},
      // plausibility
      {"Assesses whether the edited result is visually and physically "
       "plausible assuming a generally reasonable instruction, rather than "
       "judging the realism of the instruction itself.",
       {"Ask whether the Edited Image could be a real photograph of a real "
        "scene",
        "Check physical logic: support, gravity, reflections, and anatomy",
        "Check semantic logic: objects in sensible contexts and states",
        "Judge the result, not the realism of the instruction itself"},
       "This factor focuses on REAL-WORLD POSSIBILITY of the result. Do not "
       "evaluate instruction accuracy (that's Alignment) or coverage (that's "
       "Completeness).",
       {"The result is completely plausible and realistic",
        "Physical and semantic logic hold throughout the image",
        "Nothing in the result would look out of place in a real scene"},
       {"The result is highly implausible or violates real-world logic",
        "Anatomy, physics, or object states are impossible",
        "The edit produces a scene that could not exist"},
       "focus on real-world possibility of the result"},
  }};
  return kGuides;
}

const std::array<CategoryGuide, 3>& category_guides() {
  static const std::array<CategoryGuide, 3> kCategoryGuides = {{
      {"image preservation analysis",
       "assessing how well the content that should not change is preserved",
       "Your task is to evaluate how well the Edited Image preserves the "
       "content of the Input Image that the Edit Instruction did not ask to "
       "change.",
       "Be precise: identify WHAT content changed that should have stayed the "
       "same"},
      {"edit quality analysis",
       "assessing the visual realism and technical correctness of the edited "
       "content",
       "Your task is to evaluate the visual realism and technical correctness "
       "of the edited content in the Edited Image.",
       "Be precise: identify WHAT visual flaws are present and WHERE they "
       "appear"},
      {"instruction fidelity analysis",
       "assessing how well the edit follows the given instruction",
       "Your task is to evaluate how faithfully the Edited Image executes the "
       "Edit Instruction.",
       "Be precise: identify WHAT aspects of the instruction were or weren't "
       "followed"},
  }};
  return kCategoryGuides;
}

}  // namespace

const FactorGuide& factor_guide(FactorId id) {
  return guides()[static_cast<std::size_t>(id)];
}

const CategoryGuide& category_guide(Category category) {
  return category_guides()[static_cast<std::size_t>(category)];
}

}  // namespace editjudge
